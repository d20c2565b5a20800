"""Fit prescribed pressure jets with window-1 potentials on the full shift.

Level-1 fitting prescribes the pressure value and slope at a parameter
point ``t_star`` and realizes them with a two-value potential (``n - 1``
coordinates at a low value, one at a high value).  Level-2 fitting adds a
curvature target: the attainable curvature range is scanned over all
ordered two-value splits, and intermediate targets are reached by letting
one coordinate slide continuously between the two values.  The same
machinery tabulates the extreme-split solutions whose low value drifts
like ``-log n - log log n``, and inverts the scalar map ``z -> z*exp(t*z)``
on its monotone branches.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DomainError,
    FeasibilityError,
    NoSolutionError,
    NumericError,
    RangeError,
)
from .pressure import TaylorJet, pressure_jet
from .symbolic import MAX_ALPHABET, CylinderPotential, SubshiftSpec

__all__ = [
    "Germ",
    "FitResult",
    "feasibility_level1",
    "fit_level1",
    "feasible_a2_range",
    "fit_level2",
    "solve_extreme_pair",
    "solve_extreme_pair_full",
    "invert_zexp",
]

_NEWTON_TOL = 1e-13
_CURVATURE_TOL = 1e-8


@dataclass(frozen=True)
class Germ:
    """A truncated expansion ``a0 + a1*(t - t_star) [+ a2/2*(t - t_star)**2]``.

    ``coeffs`` holds two entries for a level-1 target and three for a
    level-2 target; the curvature coefficient must be non-negative since
    pressure functions are convex.
    """

    t_star: float
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        t_star = float(self.t_star)
        if not (math.isfinite(t_star) and t_star > 0.0):
            raise DomainError(f"t_star must be a positive real, got {self.t_star!r}")
        coeffs = tuple(float(x) for x in self.coeffs)
        if len(coeffs) not in (2, 3):
            raise DomainError(f"expected 2 or 3 coefficients, got {len(coeffs)}")
        if any(not math.isfinite(x) for x in coeffs):
            raise DomainError("coefficients must be finite")
        if len(coeffs) == 3 and coeffs[2] < 0.0:
            raise DomainError(
                f"curvature target must be non-negative, got {coeffs[2]!r}"
            )
        object.__setattr__(self, "t_star", t_star)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def a0(self) -> float:
        return self.coeffs[0]

    @property
    def a1(self) -> float:
        return self.coeffs[1]

    @property
    def a2(self) -> float | None:
        return self.coeffs[2] if len(self.coeffs) == 3 else None


@dataclass(frozen=True)
class FitResult:
    """A fitted potential with its independently recomputed jet.

    ``z`` lists the fitted values in ascending order; ``achieved`` is the
    jet of the fitted potential recomputed through the pressure module;
    ``residuals`` maps constraint names to absolute errors; ``feasible_a2``
    carries the scanned curvature range when one was computed.
    """

    z: tuple[float, ...]
    achieved: TaylorJet
    residuals: dict
    feasible_a2: tuple[float, float] | None = None

    def potential(self) -> CylinderPotential:
        """The fitted values as a window-1 full-shift potential."""
        return CylinderPotential(SubshiftSpec(len(self.z)), 1, self.z)


def feasibility_level1(germ: Germ, n) -> bool:
    """Whether the (value, slope) target is strictly attainable at size ``n``.

    The attainable slopes at pressure level ``a0`` form the open interval
    ``((a0 - log n)/t_star, a0/t_star)``; both endpoints are excluded.
    """
    n = _check_size_real(n)
    lower = (germ.a0 - math.log(n)) / germ.t_star
    upper = germ.a0 / germ.t_star
    return lower < germ.a1 < upper


def fit_level1(germ: Germ, n: int) -> FitResult:
    """Realize a (value, slope) target with an ``(n-1, 1)`` two-value split.

    Returns the fitted values ``z`` (low value repeated ``n - 1`` times,
    then the high value) together with the recomputed jet and the
    constraint residuals.
    """
    n = _check_size_int(n)
    _require_feasible(germ, n)
    za, zb, _, ok = kernels.two_block_sweep(
        np.array([n - 1], dtype=np.int64),
        float(n),
        germ.t_star,
        germ.a0,
        germ.a1,
        _NEWTON_TOL,
    )
    if not bool(ok[0]):
        raise NumericError(
            f"two-value solve failed for a feasible target (n={n}, germ={germ.coeffs})"
        )
    z = (n - 1) * [float(za[0])] + [float(zb[0])]
    return _finish_fit(germ, z, feasible_a2=None)


def feasible_a2_range(germ: Germ, n: int) -> tuple[float, float]:
    """Scan ordered two-value splits for the attainable curvature range.

    Every split ``(k, n-k)`` that can match the slope target is solved;
    the minimum and maximum of the resulting curvatures form an inner
    approximation of the exact attainable range (richer value patterns
    could widen it).  Splits whose solver fails are skipped with a
    warning; all splits failing is an error.
    """
    n = _check_size_int(n)
    _require_feasible(germ, n)
    ks = np.arange(1, n, dtype=np.int64)
    _, _, a2, ok = kernels.two_block_sweep(
        ks, float(n), germ.t_star, germ.a0, germ.a1, _NEWTON_TOL
    )
    reachable = _slope_reachable(germ, n, ks)
    failed = int(np.count_nonzero(reachable & ~ok))
    if failed:
        warnings.warn(
            f"{failed} two-value split(s) skipped: Newton did not converge",
            stacklevel=2,
        )
    if not ok.any():
        raise NumericError(
            f"no two-value split converged for germ={germ.coeffs}, n={n}"
        )
    values = a2[ok]
    low = float(values.min())
    high = float(values.max())
    if low < -1e-10:
        raise NumericError(f"negative curvature {low} from a converged split")
    return max(low, 0.0), high


def fit_level2(germ: Germ, n: int) -> FitResult:
    """Realize a (value, slope, curvature) target at size ``n``.

    The curvature target must lie in the scanned range from
    :func:`feasible_a2_range`.  Targets matching a two-value split are
    returned directly; intermediate targets are reached by sliding one
    coordinate continuously between the low and high values of a
    bracketing pair of splits, re-solving the value/slope constraints at
    every step.
    """
    n = _check_size_int(n)
    if germ.a2 is None:
        raise DomainError("fit_level2 needs a three-coefficient target")
    _require_feasible(germ, n)
    target = germ.a2
    ks = np.arange(1, n, dtype=np.int64)
    za_arr, zb_arr, a2_arr, ok = kernels.two_block_sweep(
        ks, float(n), germ.t_star, germ.a0, germ.a1, _NEWTON_TOL
    )
    if not ok.any():
        raise NumericError(f"no two-value split converged for germ={germ.coeffs}, n={n}")
    feasible = [
        (int(ks[i]), float(za_arr[i]), float(zb_arr[i]), float(a2_arr[i]))
        for i in range(len(ks))
        if bool(ok[i])
    ]
    a2_values = [item[3] for item in feasible]
    low, high = min(a2_values), max(a2_values)
    bounds = (max(low, 0.0), high)
    slack = 1e-12 * max(1.0, abs(high))
    if not (low - slack <= target <= high + slack):
        raise RangeError(
            f"curvature target {target} outside the attainable range "
            f"[{bounds[0]}, {bounds[1]}] for n={n}"
        )
    # A split already matching the target closes the problem.
    nearest = min(feasible, key=lambda item: abs(item[3] - target))
    if abs(nearest[3] - target) <= _CURVATURE_TOL:
        k, za, zb, _ = nearest
        z = k * [za] + (n - k) * [zb]
        return _finish_fit(germ, z, feasible_a2=bounds)
    pair = _bracketing_pair(feasible, target)
    if pair is None:
        raise NumericError(
            f"no adjacent splits bracket curvature {target} in [{low}, {high}]"
        )
    (k, za_hi_split, zb_hi_split, a2_k1), (za_lo_split, zb_lo_split, a2_k0) = pair
    # theta = 0 places the sliding coordinate at the low value (split k+1);
    # theta = 1 places it at the high value (split k).
    lo_t, hi_t = 0.0, 1.0
    h_lo = a2_k1 - target
    state = (za_hi_split, zb_hi_split)
    z_final = None
    for _ in range(300):
        mid = 0.5 * (lo_t + hi_t)
        za, zb = _solve_slider(germ, n, k, mid, state)
        state = (za, zb)
        a2_mid = _slider_curvature(germ, n, k, mid, za, zb)
        if abs(a2_mid - target) <= 0.1 * _CURVATURE_TOL:
            zc = (1.0 - mid) * za + mid * zb
            z_final = k * [za] + [zc] + (n - k - 1) * [zb]
            break
        if (a2_mid - target > 0.0) == (h_lo > 0.0):
            lo_t = mid
            h_lo = a2_mid - target
        else:
            hi_t = mid
        if hi_t - lo_t < 1e-15:
            zc = (1.0 - mid) * za + mid * zb
            z_final = k * [za] + [zc] + (n - k - 1) * [zb]
            break
    if z_final is None:
        raise NumericError(
            f"curvature homotopy did not reach target {target} for n={n}"
        )
    return _finish_fit(germ, z_final, feasible_a2=bounds)


def _bracketing_pair(feasible, target):
    """Adjacent feasible splits whose curvatures bracket ``target``.

    Returns ``((k, za_k1, zb_k1, a2_k1), (za_k0, zb_k0, a2_k0))`` where the
    first entry belongs to split ``k + 1`` (the homotopy start) and the
    second to split ``k``, or ``None`` when no adjacent pair brackets.
    """
    by_k = {item[0]: item for item in feasible}
    for k, _, _, a2_k in feasible:
        other = by_k.get(k + 1)
        if other is None:
            continue
        a2_k1 = other[3]
        lo, hi = min(a2_k, a2_k1), max(a2_k, a2_k1)
        if lo <= target <= hi:
            return (k, other[1], other[2], a2_k1), (by_k[k][1], by_k[k][2], a2_k)
    return None


def _solve_slider(
    germ: Germ, n: int, k: int, theta: float, start: tuple[float, float]
) -> tuple[float, float]:
    """Damped Newton for the value/slope constraints with a sliding coordinate.

    ``k`` coordinates sit at ``z_a``, ``n - k - 1`` at ``z_b``, and one at
    ``(1 - theta) * z_a + theta * z_b``; the two constraint equations are
    solved for ``(z_a, z_b)`` starting from ``start``.
    """
    t, a0, a1 = germ.t_star, germ.a0, germ.a1
    za, zb = start
    rest = float(n - k - 1)

    def residual(za: float, zb: float):
        zc = (1.0 - theta) * za + theta * zb
        ea = k * math.exp(t * za - a0)
        eb = rest * math.exp(t * zb - a0) if rest > 0.0 else 0.0
        ec = math.exp(t * zc - a0)
        f1 = ea + eb + ec - 1.0
        f2 = za * ea + zb * eb + zc * ec - a1
        return f1, f2, ea, eb, ec, zc

    f1, f2, ea, eb, ec, zc = residual(za, zb)
    best = abs(f1) + abs(f2)
    for _ in range(80):
        if best <= _NEWTON_TOL:
            return za, zb
        j11 = t * (ea + (1.0 - theta) * ec)
        j12 = t * (eb + theta * ec)
        j21 = ea * (1.0 + t * za) + (1.0 - theta) * ec * (1.0 + t * zc)
        j22 = eb * (1.0 + t * zb) + theta * ec * (1.0 + t * zc)
        det = j11 * j22 - j12 * j21
        if det == 0.0 or not math.isfinite(det):
            break
        dza = -(j22 * f1 - j12 * f2) / det
        dzb = -(-j21 * f1 + j11 * f2) / det
        scale = 1.0
        improved = False
        for _ in range(40):
            trial = residual(za + scale * dza, zb + scale * dzb)
            norm = abs(trial[0]) + abs(trial[1])
            if norm < best:
                za, zb = za + scale * dza, zb + scale * dzb
                f1, f2, ea, eb, ec, zc = trial
                best = norm
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    if best <= _NEWTON_TOL:
        return za, zb
    raise NumericError(
        f"sliding-coordinate solve stalled at residual {best:.3e} "
        f"(n={n}, k={k}, theta={theta})"
    )


def _slider_curvature(
    germ: Germ, n: int, k: int, theta: float, za: float, zb: float
) -> float:
    t, a0, a1 = germ.t_star, germ.a0, germ.a1
    rest = float(n - k - 1)
    zc = (1.0 - theta) * za + theta * zb
    ea = k * math.exp(t * za - a0)
    eb = rest * math.exp(t * zb - a0) if rest > 0.0 else 0.0
    ec = math.exp(t * zc - a0)
    return za * za * ea + zb * zb * eb + zc * zc * ec - a1 * a1


def _finish_fit(germ: Germ, z: list[float], feasible_a2) -> FitResult:
    z_sorted = sorted(float(v) for v in z)
    potential = CylinderPotential(SubshiftSpec(len(z_sorted)), 1, z_sorted)
    achieved = pressure_jet(potential, germ.t_star, 2)
    scale = math.exp(germ.a0)
    residuals = {
        "value": abs(achieved.derivs[0] - germ.a0) * scale,
        "slope": abs(achieved.derivs[1] - germ.a1) * scale,
    }
    if germ.a2 is not None:
        residuals["curvature"] = abs(achieved.derivs[2] - germ.a2)
    return FitResult(tuple(z_sorted), achieved, residuals, feasible_a2)


def _slope_reachable(germ: Germ, n: int, ks: np.ndarray) -> np.ndarray:
    limits = (germ.a0 - np.log(n - ks.astype(np.float64))) / germ.t_star
    return germ.a1 < limits


def _require_feasible(germ: Germ, n) -> None:
    if not feasibility_level1(germ, n):
        lower = (germ.a0 - math.log(n)) / germ.t_star
        upper = germ.a0 / germ.t_star
        raise FeasibilityError(
            "infeasible target: the slope must satisfy "
            f"(a0 - log n)/t_star < a1 < a0/t_star, i.e. {lower!r} < a1 < {upper!r}; "
            f"got a1 = {germ.a1!r} (both endpoints excluded)"
        )


def _check_size_int(n) -> int:
    n = int(n)
    if not 2 <= n <= MAX_ALPHABET:
        raise DomainError(f"alphabet size must be in [2, {MAX_ALPHABET}], got {n}")
    return n


def _check_size_real(n) -> float:
    n = float(n)
    if not (math.isfinite(n) and n >= 2.0):
        raise DomainError(f"alphabet size must be a real >= 2, got {n}")
    return n


# ---------------------------------------------------------------------------
# Extreme-split tabulation and the scalar branch inversion.
# ---------------------------------------------------------------------------

_E2 = math.exp(2.0)


def solve_extreme_pair(multiplicity: float) -> tuple[float, float]:
    """Low and high values of the extreme two-value solution at this size.

    Solves ``N*exp(z_a) + exp(z_b) = e**2`` and
    ``N*z_a*exp(z_a) + z_b*exp(z_b) = e**2`` for the branch
    ``z_a < -1 < z_b`` — the unit-parameter system whose low value drifts
    like ``-log N - log log N`` as the multiplicity ``N`` grows.  ``N``
    may be astronomically large (it enters only through its logarithm).
    """
    result = solve_extreme_pair_full(multiplicity)
    return result["z_low"], result["z_high"]


def solve_extreme_pair_full(multiplicity: float) -> dict:
    """Like :func:`solve_extreme_pair` with residuals and iteration count."""
    N = float(multiplicity)
    if not (math.isfinite(N) and N >= 10.0):
        raise DomainError(f"multiplicity must be a real >= 10, got {multiplicity!r}")
    logN = math.log(N)
    za = -logN - math.log(logN) - 1.0
    zb = 2.0

    def residual(za: float, zb: float):
        ea = math.exp(logN + za)
        eb = math.exp(zb)
        return ea + eb - _E2, za * ea + zb * eb - _E2, ea, eb

    f1, f2, ea, eb = residual(za, zb)
    best = max(abs(f1), abs(f2))
    tol = 1e-14 * _E2
    iterations = 0
    for _ in range(60):
        if best <= tol:
            break
        det = ea * eb * (zb - za)
        if det == 0.0 or not math.isfinite(det):
            raise NumericError("singular Jacobian in the extreme-pair solve")
        dza = -((1.0 + zb) * eb * f1 - eb * f2) / det
        dzb = -(-(1.0 + za) * ea * f1 + ea * f2) / det
        scale = 1.0
        improved = False
        for _ in range(40):
            trial = residual(za + scale * dza, zb + scale * dzb)
            norm = max(abs(trial[0]), abs(trial[1]))
            if norm < best:
                za, zb = za + scale * dza, zb + scale * dzb
                f1, f2, ea, eb = trial
                best = norm
                improved = True
                break
            scale *= 0.5
        iterations += 1
        if not improved:
            break
    if best > 1e-13 * _E2:
        raise NumericError(
            f"extreme-pair Newton stagnated at residual {best:.3e} "
            f"for multiplicity {multiplicity!r}"
        )
    if not za < -1.0 < zb:
        raise NumericError(
            f"extreme-pair solve left the expected branch: z_low={za}, z_high={zb}"
        )
    return {
        "multiplicity": N,
        "z_low": za,
        "z_high": zb,
        "residuals": (abs(f1), abs(f2)),
        "iterations": iterations,
    }


def invert_zexp(y: float, branch: str, t_star: float) -> float:
    """Invert ``z -> z * exp(t_star * z)`` on one of its monotone branches.

    The map decreases on ``(-inf, -1/t_star]`` and increases on
    ``[-1/t_star, inf)``, with minimum ``-1/(e*t_star)`` at the junction.
    ``branch`` selects ``"lower"`` (the decreasing piece, whose range is
    ``[-1/(e*t_star), 0)``) or ``"upper"`` (the increasing piece).
    """
    t_star = float(t_star)
    if not (math.isfinite(t_star) and t_star > 0.0):
        raise DomainError(f"t_star must be a positive real, got {t_star!r}")
    if branch not in ("lower", "upper"):
        raise DomainError(f"branch must be 'lower' or 'upper', got {branch!r}")
    y = float(y)
    junction = -1.0 / t_star
    minimum = -math.exp(-1.0) / t_star
    if y < minimum - 1e-15 * abs(minimum):
        raise NoSolutionError(
            f"no real solution: {y!r} is below the minimum {minimum!r}"
        )
    if y <= minimum:
        return junction

    def s(z: float) -> float:
        return z * math.exp(t_star * z)

    if branch == "upper":
        lo = junction
        hi = max(junction + 1.0, 1.0)
        step = 1.0
        while s(hi) < y:
            step *= 2.0
            hi += step
        # increasing branch: s(lo) <= y <= s(hi)
        for _ in range(500):
            mid = 0.5 * (lo + hi)
            if s(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, abs(hi)):
                break
        return 0.5 * (lo + hi)
    if y >= 0.0:
        raise NoSolutionError(
            f"the decreasing branch only attains values in [{minimum!r}, 0); got {y!r}"
        )
    hi = junction
    lo = junction - 1.0
    step = 1.0
    while s(lo) <= y:
        step *= 2.0
        lo -= step
    # decreasing branch: s(lo) > y >= s(hi)
    for _ in range(500):
        mid = 0.5 * (lo + hi)
        if s(mid) > y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
    return 0.5 * (lo + hi)
