"""Benchmark: compiled kernels vs the pure-Python (numpy) fallback.

Times the three O(N^2) history kernels on growing grids and prints a
speedup table.  Run from the repo root:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from memkinetics import _kernels


def best_of(repeats, fn, *args):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(repeats):
    backends = {name: _kernels.get_backend(name) for name in _kernels.available_backends()}
    if "cython" not in backends:
        print("compiled kernels not built; only the python fallback is available")

    rng = np.random.default_rng(0)
    rows = []
    for N in (1000, 2000, 4000, 8000):
        h = 1.0 / N
        rows.append((f"abm_linear_scalar a=0.8 N={N}", {
            name: best_of(repeats, mod.abm_linear_scalar, 0.8, 1.0, 0.0, 1, 0.5, 0.0, 0.0, h, N)
            for name, mod in backends.items()
        }))
    M = np.diag(np.ones(8), 1)
    M[8, 0] = 0.5
    M[8, 4] = 0.2
    x0 = np.zeros(9)
    x0[0] = 1.0
    for N in (1000, 2000, 4000):
        rows.append((f"abm_linear_system d=9 N={N}", {
            name: best_of(repeats, mod.abm_linear_system, 0.1, M, x0, 1.0 / N, N)
            for name, mod in backends.items()
        }))
    for N in (2000, 8000, 16000):
        values = np.exp(np.sin(np.linspace(0.0, 2.0, N + 1)))
        rows.append((f"caputo_l1_batch N={N}", {
            name: best_of(repeats, mod.caputo_l1_batch, values, 0.7, 2.0 / N)
            for name, mod in backends.items()
        }))

    width = max(len(r[0]) for r in rows)
    names = list(backends)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for label, times in rows:
        line = f"{label:<{width}}  " + "  ".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"  {times['python'] / times['cython']:>8.1f}x"
        print(line)


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="best-of repetitions")
    bench(parser.parse_args().repeats)
