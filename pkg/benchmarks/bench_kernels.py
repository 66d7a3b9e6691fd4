#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Three workloads bracket the package's hot paths:

* dense-small  -- many dominant-eigenvalue solves on branch-sized matrices,
                  the inner loop of type I/II classification;
* dense-large  -- one solve on a big dense bottleneck matrix;
* tree-matvec  -- matrix-free solves on wide symmetric trees.

Run from a checkout (builds nothing itself):

    python setup.py build_ext --inplace   # optional, enables "compiled"
    python benchmarks/bench_kernels.py
"""

import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import numpy as np  # noqa: E402

from perrontree import _kernels, bethe, bottleneck_matrix, random_tree  # noqa: E402


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    impls = _kernels.backends()
    if "compiled" not in impls:
        print("compiled kernel not built; run `python setup.py build_ext "
              "--inplace` to compare both backends")

    small = [bottleneck_matrix(random_tree(60, seed)).astype(np.float64)
             for seed in range(40)]
    large = bottleneck_matrix(random_tree(1500, 1)).astype(np.float64)
    wide = bethe(7, 4)  # 5461 vertices, depth 7

    workloads = {
        "dense-small (40 solves, n=60)": lambda impl: [
            impl.power_iteration_dense(m, 0.0, 1e-12, 200000) for m in small],
        "dense-large (1 solve, n=1500)": lambda impl:
            impl.power_iteration_dense(large, 0.0, 1e-12, 200000),
        f"tree-matvec (1 solve, n={wide.n})": lambda impl:
            impl.power_iteration_tree(wide.parent, wide.order, wide.depth,
                                      False, 1e-12, 200000),
    }

    print(f"{'workload':38s}" + "".join(f"{name:>14s}" for name in impls))
    for label, run in workloads.items():
        times = {name: timeit(lambda impl=impl: run(impl), 3)
                 for name, impl in impls.items()}
        row = f"{label:38s}" + "".join(f"{t * 1e3:12.2f}ms" for t in times.values())
        if "compiled" in times and "python" in times:
            row += f"   ({times['python'] / times['compiled']:.2f}x)"
        print(row)


if __name__ == "__main__":
    main()
