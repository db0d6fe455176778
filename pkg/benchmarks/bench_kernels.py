"""Time the compiled and pure-Python modular echelon kernels on counit workloads.

    python benchmarks/bench_kernels.py --n 3 --repeat 3

Both kernels see the same rows in the same order, block by block, so the
ranks must match; the script exits non-zero if they do not.
"""
from __future__ import annotations

import argparse
import sys
import time

from sblob import kernels
from sblob._echelon_py import ModEchelon as PyModEchelon
from sblob.module_theory import counit_vectors
from sblob.rank_engine import _class_index, _homogeneous_class
from sblob.scalars import PRIMES, PrimeField, specialize


def collect(n: int, seed: int, prime: int) -> dict[int, list[tuple[list[int], list[int]]]]:
    """Counit rows grouped by class, already in class-local column indices."""
    field = PrimeField(prime)
    blocks: dict[int, list] = {}
    for vec in counit_vectors(n, specialize(seed))(field):
        r = _homogeneous_class(vec)
        _, idx = _class_index(n, r)
        blocks.setdefault(r, []).append(([idx[w] for w in vec.terms], list(vec.terms.values())))
    return blocks


def run(cls, n: int, blocks, prime: int) -> tuple[int, float]:
    t0 = time.perf_counter()
    rank = 0
    for r, rows in blocks.items():
        ech = cls(len(_class_index(n, r)[0]), prime)
        for cols, vals in rows:
            ech.insert(cols, vals)
        rank += ech.rank
    return rank, time.perf_counter() - t0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.COMPILED:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return 1
    prime = PRIMES[0]
    print(f"{'n':>2} {'rows':>8} {'rank':>6} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    ok = True
    for n in args.n:
        blocks = collect(n, args.seed, prime)
        nrows = sum(len(b) for b in blocks.values())
        best = {}
        for name, cls in (("cython", kernels.ModEchelon), ("python", PyModEchelon)):
            times, ranks = [], set()
            for _ in range(args.repeat):
                rank, dt = run(cls, n, blocks, prime)
                times.append(dt)
                ranks.add(rank)
            best[name] = (ranks, min(times))
        ok &= best["cython"][0] == best["python"][0] and len(best["cython"][0]) == 1
        rank = next(iter(best["cython"][0]))
        tc, tp = best["cython"][1], best["python"][1]
        print(f"{n:>2} {nrows:>8} {rank:>6} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")
    if not ok:
        print("kernels disagree on rank", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
