"""Shift spaces of finite type and locally constant potentials.

A shift space is described by its alphabet size ``n`` and an optional 0/1
transition matrix; a locally constant potential assigns one real value to
every word of a fixed window length ``w``, stored in base-``n`` word
order.  For the window-1 full-shift case this module also produces the
product-measure weights ``p_i ∝ exp(t * c_i)`` that play the role of the
equilibrium distribution everywhere else in the library.

Symbols are 0-based.  Two-sided windows collapse to one-sided ones of the
same total length without changing any pressure value, so only one-sided
windows are stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, SizeLimitError, UnsupportedConfigurationError

__all__ = [
    "MAX_ALPHABET",
    "MAX_TABLE_SIZE",
    "SubshiftSpec",
    "CylinderPotential",
    "BernoulliWeights",
    "word_index",
    "index_to_word",
    "equilibrium_weights",
    "potential_to_dict",
    "potential_from_dict",
    "potential_from_json",
]

MAX_ALPHABET = 2**16
MAX_TABLE_SIZE = 2**26


@dataclass(frozen=True)
class SubshiftSpec:
    """Alphabet size plus an optional 0/1 transition matrix.

    ``transition[i][j] == 1`` means symbol ``j`` may follow symbol ``i``.
    ``None`` means the full shift.  The ``irreducible`` flag is computed
    at construction (strong connectivity of the transition graph).
    """

    n: int
    transition: tuple[tuple[int, ...], ...] | None = None
    irreducible: bool = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not 2 <= int(self.n) <= MAX_ALPHABET:
            raise DomainError(f"alphabet size must be in [2, {MAX_ALPHABET}], got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.transition is None:
            object.__setattr__(self, "irreducible", True)
            return
        rows = tuple(tuple(int(x) for x in row) for row in self.transition)
        if len(rows) != self.n or any(len(row) != self.n for row in rows):
            raise DomainError(f"transition matrix must be {self.n}x{self.n}")
        if any(x not in (0, 1) for row in rows for x in row):
            raise DomainError("transition entries must be 0 or 1")
        if any(not any(row) for row in rows):
            raise DomainError("transition matrix has an all-zero row")
        if any(not any(row[j] for row in rows) for j in range(self.n)):
            raise DomainError("transition matrix has an all-zero column")
        object.__setattr__(self, "transition", rows)
        object.__setattr__(self, "irreducible", _strongly_connected(rows))

    @property
    def is_full_shift(self) -> bool:
        return self.transition is None

    def transition_matrix(self) -> np.ndarray | None:
        """Transition matrix as a float array, or ``None`` for the full shift."""
        if self.transition is None:
            return None
        return np.asarray(self.transition, dtype=np.float64)


def _strongly_connected(rows: tuple[tuple[int, ...], ...]) -> bool:
    n = len(rows)

    def reachable(adj: Sequence[Sequence[int]]) -> bool:
        seen = [False] * n
        seen[0] = True
        frontier = [0]
        while frontier:
            i = frontier.pop()
            for j in range(n):
                if adj[i][j] and not seen[j]:
                    seen[j] = True
                    frontier.append(j)
        return all(seen)

    reverse = tuple(tuple(rows[j][i] for j in range(n)) for i in range(n))
    return reachable(rows) and reachable(reverse)


@dataclass(frozen=True, eq=False)
class CylinderPotential:
    """A locally constant potential: window length ``w`` and ``n**w`` values.

    ``values[word_index(word, n)]`` is the value on the cylinder of the
    length-``w`` word; the table is stored as a read-only float64 array.
    """

    space: SubshiftSpec
    window: int
    values: np.ndarray

    def __post_init__(self) -> None:
        if int(self.window) < 1:
            raise DomainError(f"window must be >= 1, got {self.window}")
        object.__setattr__(self, "window", int(self.window))
        size = self.space.n**self.window
        if size > MAX_TABLE_SIZE:
            raise SizeLimitError(
                f"table size {self.space.n}**{self.window} exceeds {MAX_TABLE_SIZE}"
            )
        arr = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if arr.size != size:
            raise DomainError(f"expected {size} values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("potential values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.space.n

    def shifted(self, offset: float) -> "CylinderPotential":
        """Same potential with ``offset`` added to every value."""
        return CylinderPotential(self.space, self.window, self.values + float(offset))


@dataclass(frozen=True)
class BernoulliWeights:
    """A strictly positive probability vector over the alphabet."""

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probabilities)
        if len(probs) < 2:
            raise DomainError("need at least two symbols")
        if any(not p > 0.0 for p in probs):
            raise DomainError("probabilities must be strictly positive")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {sum(probs)!r}, not 1")
        object.__setattr__(self, "probabilities", probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probabilities, dtype=np.float64)


def word_index(word: Sequence[int], n: int) -> int:
    """Base-``n`` integer value of a word over symbols ``0..n-1``."""
    n = int(n)
    if n < 2:
        raise DomainError(f"alphabet size must be >= 2, got {n}")
    value = 0
    for symbol in word:
        s = int(symbol)
        if not 0 <= s < n:
            raise DomainError(f"symbol {s} outside alphabet of size {n}")
        value = value * n + s
    return value


def index_to_word(index: int, n: int, window: int) -> tuple[int, ...]:
    """Inverse of :func:`word_index` for words of length ``window``."""
    n, window, index = int(n), int(window), int(index)
    if not 0 <= index < n**window:
        raise DomainError(f"index {index} outside table of size {n}**{window}")
    word = []
    for _ in range(window):
        index, symbol = divmod(index, n)
        word.append(symbol)
    return tuple(reversed(word))


def equilibrium_weights(potential: CylinderPotential, t: float) -> BernoulliWeights:
    """Product-measure weights ``p_i ∝ exp(t * c_i)`` of a window-1 potential.

    Only defined on the full shift with window 1; the exponentials are
    max-subtracted so extreme values cannot overflow.
    """
    if not potential.space.is_full_shift:
        raise UnsupportedConfigurationError(
            "equilibrium weights require the full shift (no transition matrix)"
        )
    if potential.window != 1:
        raise UnsupportedConfigurationError(
            f"equilibrium weights require window 1, got window {potential.window}"
        )
    scaled = float(t) * potential.values
    scaled = scaled - scaled.max()
    w = np.exp(scaled)
    p = w / w.sum()
    return BernoulliWeights(tuple(float(x) for x in p))


def potential_to_dict(potential: CylinderPotential) -> dict:
    """JSON-ready dict: ``{"n", "window", "values"[, "transition"]}``."""
    out: dict = {
        "n": potential.n,
        "window": potential.window,
        "values": [float(v) for v in potential.values],
    }
    if potential.space.transition is not None:
        out["transition"] = [list(row) for row in potential.space.transition]
    return out


def potential_from_dict(obj: dict) -> CylinderPotential:
    """Build a potential from the dict schema of :func:`potential_to_dict`."""
    if not isinstance(obj, dict):
        raise DomainError(f"potential spec must be an object, got {type(obj).__name__}")
    missing = {"n", "window", "values"} - set(obj)
    if missing:
        raise DomainError(f"potential spec missing keys: {sorted(missing)}")
    transition = obj.get("transition")
    space = SubshiftSpec(
        int(obj["n"]),
        None if transition is None else tuple(tuple(int(x) for x in row) for row in transition),
    )
    return CylinderPotential(space, int(obj["window"]), obj["values"])


def potential_from_json(text: str) -> CylinderPotential:
    """Parse a JSON potential spec (accepts output wrapped under ``"potential"``)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid potential JSON: {exc}") from exc
    if isinstance(obj, dict) and "potential" in obj and "values" not in obj:
        obj = obj["potential"]
    return potential_from_dict(obj)
