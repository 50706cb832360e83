"""Compare the compiled and pure-Python exact kernels.

    python benchmarks/bench_kernels.py [--dim 8] [--repeat 5]

Times the raw kernels on random integer matrices and an end-to-end rational
pinv with each kernel set swapped in.
"""

import argparse
import timeit

import numpy as np

from pseudoschur import _kernels_py, kernels
from pseudoschur import matrix as core
from pseudoschur.harness import _low_rank

try:
    from pseudoschur import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _swap(impl):
    kernels.int_matmul = impl.int_matmul
    kernels.ff_rref = impl.ff_rref
    kernels.echelon_pivots = impl.echelon_pivots


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=8)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    a = rng.integers(-50, 51, size=(args.dim, args.dim)).tolist()
    b = rng.integers(-50, 51, size=(args.dim, args.dim)).tolist()
    m = _low_rank(rng, args.dim + 2, args.dim, max(1, args.dim - 2), core.RATIONAL)

    impls = [("python", _kernels_py)]
    if _kernels_c is not None:
        impls.append(("cython", _kernels_c))
    else:
        print("compiled kernels not built; timing the fallback only")

    cases = {
        "int_matmul": lambda impl: impl.int_matmul(a, b),
        "ff_rref": lambda impl: impl.ff_rref(a),
        "rational pinv": lambda impl: core.pinv(m),
    }
    original = kernels.int_matmul, kernels.ff_rref, kernels.echelon_pivots
    results = {}
    try:
        for label, impl in impls:
            _swap(impl)
            for case, fn in cases.items():
                t = min(timeit.repeat(lambda: fn(impl), number=args.number, repeat=args.repeat))
                results[(case, label)] = t / args.number
    finally:
        kernels.int_matmul, kernels.ff_rref, kernels.echelon_pivots = original

    print(f"{'case':16s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}")
    for case in cases:
        py = results[(case, "python")] * 1e3
        if _kernels_c is not None:
            cy = results[(case, "cython")] * 1e3
            print(f"{case:16s} {py:12.3f} {cy:12.3f} {py / cy:8.2f}x")
        else:
            print(f"{case:16s} {py:12.3f} {'-':>12s}")


if __name__ == "__main__":
    main()
