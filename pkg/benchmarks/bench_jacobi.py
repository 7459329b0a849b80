"""Time the compiled and pure-Python Jacobi kernels on parity blocks.

    python3 benchmarks/bench_jacobi.py [--sizes 30 60 120] [--repeat 3]

Both kernels are also checked to return bit-identical eigenpairs.
"""

import argparse
import time

import numpy as np

from rabigvm import eigen
from rabigvm.model import ModelParams, parity_block


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[30, 60, 120])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    backends = eigen.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python kernel is available")
    params = ModelParams(1.0, 1.0, 0.6)
    print(f"{'n_max':>6} " + " ".join(f"{b:>12}" for b in backends) + "  speedup  identical")
    for n in args.sizes:
        block = parity_block(params, n, -1)
        times, results = {}, {}
        for b in backends:
            results[b] = eigen.eigensolve_symmetric(block, backend=b)
            times[b] = best_time(lambda: eigen.eigensolve_symmetric(block, backend=b), args.repeat)
        cols = " ".join(f"{times[b] * 1e3:10.2f}ms" for b in backends)
        if len(backends) == 2:
            speedup = f"{times['python'] / times['compiled']:7.1f}x"
            same = all(np.array_equal(x, y) for x, y in zip(results["python"], results["compiled"]))
        else:
            speedup, same = "      -", "-"
        print(f"{n:>6} {cols}  {speedup}  {same}")


if __name__ == "__main__":
    main()
