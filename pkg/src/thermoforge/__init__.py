"""Pressure functions of shift spaces: jets, germ fitting, and diagnostics.

The package computes pressure functions of locally constant potentials on
full shifts (closed form for window 1, spectrally for wider windows and
transition-constrained spaces), their derivative jets through cumulant
recursions, and solves the inverse problem of fitting prescribed jet
coefficients with small alphabets.  Companion modules evaluate curvature
obstruction diagnostics, verify the orbit-sum central limit behavior by
Monte Carlo, and study pressure convergence under window discretization
of geometrically decaying potentials.
"""

from .approx import ConvergenceRow, DecayingPotentialSpec, convergence_study, discretize
from .cltsim import (
    CltReport,
    SimConfig,
    center_potential,
    edgeworth_correction,
    simulate_gm,
)
from .combinatorics import (
    MAX_PARTITION_ORDER,
    compose_derivatives,
    fdb_coefficient,
    partitions,
)
from .errors import (
    ConvergenceError,
    DegeneratePotentialError,
    DomainError,
    FeasibilityError,
    InsufficientDataError,
    InvalidPartitionError,
    NoSolutionError,
    NumericError,
    OrderLimitError,
    RangeError,
    SizeLimitError,
    ThermoforgeError,
    UnsupportedConfigurationError,
)
from .germfit import (
    FitResult,
    Germ,
    feasibility_level1,
    feasible_a2_range,
    fit_level1,
    fit_level2,
    invert_zexp,
    solve_extreme_pair,
    solve_extreme_pair_full,
)
from .pressure import (
    MAX_JET_ORDER,
    QValues,
    TaylorJet,
    finite_difference_jet,
    pressure,
    pressure_jet,
    pressure_spectral,
    q_values,
    verify_derivative_formulas,
)
from .rigidity import (
    MIN_DECAY_RATE,
    CandidateFunction,
    RigidityReport,
    divergence_diagnostic,
    fabc_curvature_parts,
    fabc_derivs,
    rigidity_inequalities,
)
from .symbolic import (
    MAX_ALPHABET,
    MAX_TABLE_SIZE,
    BernoulliWeights,
    CylinderPotential,
    SubshiftSpec,
    equilibrium_weights,
    index_to_word,
    potential_from_dict,
    potential_from_json,
    potential_to_dict,
    word_index,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "ThermoforgeError",
    "DomainError",
    "NumericError",
    "SizeLimitError",
    "InvalidPartitionError",
    "InsufficientDataError",
    "UnsupportedConfigurationError",
    "OrderLimitError",
    "FeasibilityError",
    "RangeError",
    "NoSolutionError",
    "DegeneratePotentialError",
    "ConvergenceError",
    # combinatorics
    "MAX_PARTITION_ORDER",
    "partitions",
    "fdb_coefficient",
    "compose_derivatives",
    # symbolic
    "MAX_ALPHABET",
    "MAX_TABLE_SIZE",
    "SubshiftSpec",
    "CylinderPotential",
    "BernoulliWeights",
    "equilibrium_weights",
    "word_index",
    "index_to_word",
    "potential_to_dict",
    "potential_from_dict",
    "potential_from_json",
    # pressure
    "MAX_JET_ORDER",
    "TaylorJet",
    "QValues",
    "pressure",
    "pressure_spectral",
    "pressure_jet",
    "q_values",
    "verify_derivative_formulas",
    "finite_difference_jet",
    # germfit
    "Germ",
    "FitResult",
    "feasibility_level1",
    "fit_level1",
    "feasible_a2_range",
    "fit_level2",
    "solve_extreme_pair",
    "solve_extreme_pair_full",
    "invert_zexp",
    # rigidity
    "MIN_DECAY_RATE",
    "CandidateFunction",
    "RigidityReport",
    "fabc_derivs",
    "fabc_curvature_parts",
    "divergence_diagnostic",
    "rigidity_inequalities",
    # cltsim
    "SimConfig",
    "CltReport",
    "center_potential",
    "simulate_gm",
    "edgeworth_correction",
    # approx
    "DecayingPotentialSpec",
    "ConvergenceRow",
    "discretize",
    "convergence_study",
]
