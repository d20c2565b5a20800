"""Benchmark the JIT kernels against their pure-numpy twins.

Times the two hot kernels — the word-graph power iteration and the
two-value-slice sweep — on representative workloads, reporting best-of-N
wall times per backend plus the speedup.  Also cross-checks that both
backends return bit-identical results on the benchmark inputs before
timing them.

Usage::

    python3 benchmarks/bench_kernels.py [--reps 5] [--sweep-n 4000] [--window 16]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from thermoforge import kernels


def _time_best(fn, args, reps: int) -> float:
    best = math.inf
    for _ in range(reps):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def _build_cases(window: int, sweep_n: int) -> dict:
    rng = np.random.Generator(np.random.Philox(20250822))
    n = 2
    size = n**window
    weights = np.exp(rng.uniform(-1.0, 0.5, size=size) - 0.5)
    # Slope target near the lower feasibility edge keeps most slices live.
    t, a0 = 1.0, 2.0
    a1 = (a0 - math.log(sweep_n)) / t + 0.05
    ks = np.arange(1, sweep_n, dtype=np.int64)
    return {
        "debruijn_power": {
            "args": (weights, n, n ** (window - 2), 1e-13, 100_000, 1e-3),
            "label": f"word graph n={n} window={window} ({size} weights)",
        },
        "two_block_sweep": {
            "args": (ks, float(sweep_n), t, a0, a1, 1e-13, 60),
            "label": f"slice sweep n={sweep_n} ({len(ks)} slices)",
        },
    }


def _check_parity(impls_a, impls_b, cases) -> None:
    """Confirm both backends agree before timing them.

    The implementations can differ in the last ulp — numpy's pairwise
    summation and vectorized exp vs the JIT loop's sequential sums and
    scalar libm — so agreement is asserted to 1e-10 and the worst
    deviation reported.
    """
    for name, case in cases.items():
        out_a = impls_a[name](*case["args"])
        out_b = impls_b[name](*case["args"])
        worst = 0.0
        for x, y in zip(out_a, out_b):
            x = np.atleast_1d(np.asarray(x, dtype=np.float64))
            y = np.atleast_1d(np.asarray(y, dtype=np.float64))
            if not np.array_equal(np.isnan(x), np.isnan(y)):
                raise SystemExit(f"backend mismatch on {name}: NaN patterns differ")
            finite = ~np.isnan(x)
            if finite.any():
                worst = max(worst, float(np.max(np.abs(x[finite] - y[finite]))))
        if worst > 1e-10:
            raise SystemExit(f"backend mismatch on {name}: max deviation {worst:.3e}")
        print(f"parity: {name:<18} max abs deviation {worst:.1e}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=5, help="timing repetitions (best kept)")
    parser.add_argument("--sweep-n", type=int, default=4000, help="sweep alphabet size")
    parser.add_argument("--window", type=int, default=16, help="word-graph window length")
    args = parser.parse_args()

    impls = kernels.backends()
    if impls["numba"] is None:
        print("numba is not importable; nothing to compare (numpy only).")
        return 0

    cases = _build_cases(args.window, args.sweep_n)

    # First calls trigger JIT compilation; do them before timing.
    for name, case in cases.items():
        impls["numba"][name](*case["args"])

    _check_parity(impls["numpy"], impls["numba"], cases)
    print()

    header = f"{'kernel':<18} {'workload':<38} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, case in cases.items():
        t_numpy = _time_best(impls["numpy"][name], case["args"], args.reps)
        t_numba = _time_best(impls["numba"][name], case["args"], args.reps)
        print(
            f"{name:<18} {case['label']:<38} {t_numpy * 1e3:>8.2f}ms "
            f"{t_numba * 1e3:>8.2f}ms {t_numpy / t_numba:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
