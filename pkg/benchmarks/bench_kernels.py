"""Compare the compiled echelon kernel with the numpy fallback.

Two workloads:

* ``random``: absorb random sparse rows (bracket-like density) into a
  square basis, then reduce a batch of test vectors.
* ``lcs``: build L_m(A_2) through a given total degree, which is what the
  table computations spend their time on.

Usage::

    python3 benchmarks/bench_kernels.py --size 600 --repeat 3
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from lcslab.linalg import DEFAULT_PRIMES, _fallback

try:
    from lcslab.linalg._kernels import ModEchelon as Compiled
except ImportError:
    Compiled = None

P = DEFAULT_PRIMES[0]


def random_csr(rows: int, cols: int, per_row: int, seed: int):
    rng = np.random.default_rng(seed)
    indptr = np.arange(0, rows * per_row + 1, per_row, dtype=np.int64)
    indices = np.concatenate([np.sort(rng.choice(cols, per_row, replace=False)) for _ in range(rows)])
    data = rng.integers(1, P, size=rows * per_row, dtype=np.int64)
    return indptr, indices.astype(np.int64), data


def run_random(cls, size: int, seed: int) -> float:
    indptr, indices, data = random_csr(2 * size, size, 8, seed)
    start = time.perf_counter()
    ech = cls(size, P)
    ech.absorb(indptr, indices, data)
    for r in range(0, 2 * size, 7):
        a, b = indptr[r], indptr[r + 1]
        ech.reduce(indices[a:b], data[a:b])
    return time.perf_counter() - start


def run_lcs(cls, maxdeg: int, levels: int) -> float:
    import lcslab.linalg as linalg
    from lcslab.lcs import LcsEngine

    saved = linalg._Compiled
    linalg._Compiled = cls if cls is Compiled else None
    try:
        start = time.perf_counter()
        LcsEngine(2, linalg.Field(P)).dims(range(1, levels + 1), maxdeg)
        return time.perf_counter() - start
    finally:
        linalg._Compiled = saved


def timed(fn, repeat: int) -> float:
    return statistics.median(fn() for _ in range(repeat))


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=600, help="columns in the random workload")
    ap.add_argument("--maxdeg", type=int, default=10, help="total degree for the lcs workload")
    ap.add_argument("--levels", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = [("python", _fallback.ModEchelon)]
    if Compiled is not None:
        backends.insert(0, ("compiled", Compiled))
    else:
        print("compiled kernel not built; timing the fallback only")

    results = {}
    for name, cls in backends:
        results[name] = (
            timed(lambda: run_random(cls, args.size, 0), args.repeat),
            timed(lambda: run_lcs(cls, args.maxdeg, args.levels), args.repeat),
        )
    print(f"{'backend':<10}{'random ' + str(args.size):>16}{'lcs n=2 D=' + str(args.maxdeg):>18}")
    for name, (r, l) in results.items():
        print(f"{name:<10}{r:>15.3f}s{l:>17.3f}s")
    if len(results) == 2:
        (r0, l0), (r1, l1) = results["compiled"], results["python"]
        print(f"{'speedup':<10}{r1 / r0:>15.1f}x{l1 / l0:>17.1f}x")


if __name__ == "__main__":
    main()
