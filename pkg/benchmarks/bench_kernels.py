"""Compare the numba and numpy backends on the three hot kernels.

    python benchmarks/bench_kernels.py [--limit N] [--repeat R]

The first numba call is timed separately (JIT compile or cache load) and
excluded from the steady-state figures. Both backends must agree exactly.
"""

import argparse
import time

import numpy as np

from cmrt import kernels
from cmrt._accel import HAS_NUMBA
from cmrt.arith import is_fundamental_discriminant, is_prime
from cmrt.fields import norm_form


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def cases(limit):
    discs = [d for d in range(-3, -501, -1) if is_fundamental_discriminant(d)]
    primes = [p for p in range(3, 51) if is_prime(p)]
    return {
        f"reduced_form_counts({limit})": lambda b: kernels.reduced_form_counts(limit, backend=b),
        "count_reduced_forms, 500 discriminants near 10^6": lambda b: [
            kernels.count_reduced_forms(D, backend=b) for D in range(999_000, 1_000_000) if D % 4 in (0, 3)
        ],
        "residue_unit_count, |d_K| <= 500, ell <= 50": lambda b: [
            kernels.residue_unit_count(*norm_form(d), ell, backend=b) for d in discs for ell in primes
        ],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--limit", type=int, default=2_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    print(f"{'kernel':<52}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases(args.limit).items():
        if HAS_NUMBA:
            start = time.perf_counter()
            fn("numba")
            warmup = time.perf_counter() - start
        timings, results = {}, {}
        for b in backends:
            timings[b], results[b] = best_of(lambda: fn(b), args.repeat)
        if HAS_NUMBA:
            a, b = results["numpy"], results["numba"]
            same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            if not same:
                raise SystemExit(f"backends disagree on {name}")
        row = f"{name:<52}" + "".join(f"{timings[b]:>11.3f}s" for b in backends)
        if HAS_NUMBA:
            row += f"{timings['numpy'] / timings['numba']:>9.1f}x   (first numba call {warmup:.2f}s)"
        print(row)


if __name__ == "__main__":
    main()
