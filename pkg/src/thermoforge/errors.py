"""Exception hierarchy shared by every thermoforge module.

Two families matter to callers:

* :class:`DomainError` — the request itself is outside the supported
  contract (bad parameters, infeasible targets, size ceilings).  The CLI
  maps these to exit code 2.
* :class:`NumericError` — the request was legal but an iterative solver
  failed to converge.  The CLI maps these to exit code 3.
"""

from __future__ import annotations

__all__ = [
    "ThermoforgeError",
    "DomainError",
    "SizeLimitError",
    "InvalidPartitionError",
    "InsufficientDataError",
    "UnsupportedConfigurationError",
    "OrderLimitError",
    "FeasibilityError",
    "RangeError",
    "NoSolutionError",
    "DegeneratePotentialError",
    "NumericError",
    "ConvergenceError",
]


class ThermoforgeError(Exception):
    """Base class for all library-specific errors."""


class DomainError(ThermoforgeError, ValueError):
    """Inputs violate a documented precondition."""


class SizeLimitError(DomainError):
    """A size guard (table ceiling, partition-order cap) was exceeded."""


class InvalidPartitionError(DomainError):
    """A claimed integer partition does not sum to its target."""


class InsufficientDataError(DomainError):
    """A derivative list is too short for the requested order."""


class UnsupportedConfigurationError(DomainError):
    """The operation does not support this space/potential combination."""


class OrderLimitError(DomainError):
    """Requested derivative order exceeds the supported cap."""


class FeasibilityError(DomainError):
    """A germ-fitting target violates its strict feasibility window."""


class RangeError(DomainError):
    """A curvature target lies outside the attainable range."""


class NoSolutionError(DomainError):
    """A branch inversion was requested for a value off that branch."""


class DegeneratePotentialError(DomainError):
    """The potential is constant where a non-constant one is required."""


class NumericError(ThermoforgeError, RuntimeError):
    """An iterative method failed to reach its tolerance."""


class ConvergenceError(NumericError):
    """Iteration cap reached before the convergence test was met."""
