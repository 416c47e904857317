"""Compiled vs pure-Python exact kernels on random rational matrices.

    python3 benchmarks/bench_kernels.py [--sizes 8,16,32] [--repeat 5] [--seed 0]

Both kernels receive identical inputs; results are compared for equality
before any timing is reported.
"""
import argparse
import random
import timeit
from fractions import Fraction

from graded_tannakian import _kernels_py

try:
    from graded_tannakian import _kernels
except ImportError:
    _kernels = None


def random_matrix(rng, n, m, density, den):
    def entry():
        if rng.random() > density:
            return Fraction(0)
        return Fraction(rng.randint(-9, 9), rng.randint(1, den))
    return [[entry() for _ in range(m)] for _ in range(n)]


def workloads(rng, n):
    # integer and rational, square and rank-deficient wide, sparse and dense
    low_rank = random_matrix(rng, n, n // 2 or 1, 1.0, 3)
    wide = [row + [sum(row[: n // 4 or 1], Fraction(0))] * n for row in low_rank]
    return {
        "integer dense": random_matrix(rng, n, n, 1.0, 1),
        "rational dense": random_matrix(rng, n, n, 1.0, 7),
        "sparse": random_matrix(rng, n, n, 0.15, 3),
        "deficient wide": wide,
    }


def bench(kernel, op, rows, repeat):
    cols = [list(c) for c in zip(*rows)]
    if op == "rref":
        call = lambda: kernel.rref([list(r) for r in rows], len(rows[0]))
    else:
        call = lambda: kernel.matmul(rows, cols)
    n = max(1, int(0.2 / max(timeit.timeit(call, number=1), 1e-6)))
    return min(timeit.repeat(call, number=n, repeat=repeat)) / n, call()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,16,32")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled kernel not built; run `pip install --no-build-isolation -e .`")
    rng = random.Random(args.seed)
    print(f"{'op':6} {'size':>4}  {'workload':15} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, rows in workloads(rng, n).items():
            for op in ("rref", "matmul"):
                if op == "matmul" and len(rows) != len(rows[0]):
                    continue
                tp, rp = bench(_kernels_py, op, rows, args.repeat)
                tc, rc = bench(_kernels, op, rows, args.repeat)
                if rp != rc:
                    raise SystemExit(f"kernels disagree on {op} {name} n={n}")
                print(f"{op:6} {n:>4}  {name:15} {tp * 1e3:>10.3f} {tc * 1e3:>12.3f} {tp / tc:>7.2f}x")


if __name__ == "__main__":
    main()
