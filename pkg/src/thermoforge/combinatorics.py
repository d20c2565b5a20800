"""Integer partitions and set-division coefficients for derivative algebra.

The chain rule for high-order derivatives of a composition ``g(f(t))``
expands into a sum over integer partitions, one term per way of dividing
the differentiation order into blocks.  This module enumerates the
partitions, computes the block-division counts, and applies the formula
numerically.  Everything here is exact integer/float arithmetic on small
inputs; a hard guard keeps the enumeration away from combinatorial
blowup.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from .errors import InsufficientDataError, InvalidPartitionError, SizeLimitError

__all__ = ["MAX_PARTITION_ORDER", "partitions", "fdb_coefficient", "compose_derivatives"]

# p(64) is ~1.7e6 partitions; exhaustive enumeration beyond that is not useful.
MAX_PARTITION_ORDER = 64


def partitions(j: int) -> list[tuple[int, ...]]:
    """Return all integer partitions of ``j`` in reverse-lexicographic order.

    Each partition is a non-increasing tuple of positive parts.  ``j = 0``
    yields the single empty partition ``()``.

    Parameters
    ----------
    j : int
        Non-negative integer to partition, at most :data:`MAX_PARTITION_ORDER`.

    Returns
    -------
    list of tuple of int
        Every partition exactly once, largest-first ordering, e.g.
        ``partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]``.
    """
    j = _check_order(j)
    if j == 0:
        return [()]
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def descend(remaining: int, cap: int) -> None:
        if remaining == 0:
            out.append(tuple(stack))
            return
        for part in range(min(cap, remaining), 0, -1):
            stack.append(part)
            descend(remaining - part, part)
            stack.pop()

    descend(j, j)
    return out


def fdb_coefficient(j: int, tau: Sequence[int]) -> int:
    """Count the set divisions of ``j`` elements into blocks of sizes ``tau``.

    The closed form is ``j! / (prod(tau_i!) * prod(mult_m!))`` where
    ``mult_m`` is the multiplicity of block size ``m`` in ``tau``.  The
    empty partition of ``j = 0`` returns 1 by convention.

    Raises
    ------
    InvalidPartitionError
        If ``tau`` has a non-positive part or does not sum to ``j``.
    """
    j = _check_order(j)
    parts = tuple(int(p) for p in tau)
    if any(p < 1 for p in parts):
        raise InvalidPartitionError(f"partition parts must be positive, got {parts}")
    if sum(parts) != j:
        raise InvalidPartitionError(f"partition {parts} does not sum to {j}")
    value = math.factorial(j)
    for p in parts:
        value //= math.factorial(p)
    for mult in Counter(parts).values():
        value //= math.factorial(mult)
    return value


def compose_derivatives(
    outer_derivs: Sequence[float], inner_derivs: Sequence[float], order: int
) -> float:
    """Evaluate the ``order``-th derivative of a composition ``g(f(t))``.

    ``outer_derivs[k-1]`` must hold ``g^(k)`` evaluated at ``f(t)`` and
    ``inner_derivs[k-1]`` must hold ``f^(k)(t)``, for ``k = 1..order``.
    The result is the partition sum

    ``sum over partitions tau of order:  B_tau * g^(q)(f) * prod f^(tau_i)``

    with ``q`` the number of blocks of ``tau`` and ``B_tau`` the
    coefficient from :func:`fdb_coefficient`.

    Raises
    ------
    InsufficientDataError
        If either derivative list is shorter than ``order``.
    """
    order = _check_order(order)
    if order < 1:
        raise InsufficientDataError("composition order must be at least 1")
    if len(outer_derivs) < order or len(inner_derivs) < order:
        raise InsufficientDataError(
            f"need derivatives 1..{order}, got outer={len(outer_derivs)} "
            f"inner={len(inner_derivs)}"
        )
    total = 0.0
    for tau in partitions(order):
        term = float(fdb_coefficient(order, tau)) * float(outer_derivs[len(tau) - 1])
        for p in tau:
            term *= float(inner_derivs[p - 1])
        total += term
    return total


def _check_order(j: int) -> int:
    j = int(j)
    if j < 0:
        raise InvalidPartitionError(f"order must be non-negative, got {j}")
    if j > MAX_PARTITION_ORDER:
        raise SizeLimitError(
            f"order {j} exceeds the enumeration guard {MAX_PARTITION_ORDER}"
        )
    return j
