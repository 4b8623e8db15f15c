#!/usr/bin/env python3
"""Benchmark the numba kernel path against the pure-numpy fallback.

Times each hot kernel on synthetic workloads sized like real solves, then an
end-to-end weighted theta level solve, and prints one table per kernel with
the speedup factor.  Run from the repository root:

    python3 benchmarks/kernel_bench.py [--sizes 10,30,60] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spectralchroma import kernels
from spectralchroma.graphs import cycle, erdos_renyi, kneser
from spectralchroma.theta import theta_k


def _time_best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0


def _spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def _level_constraints(n, seed):
    """Constraint triplets shaped like the trace-level program on G(n, 1/2)."""
    g = erdos_renyi(n, 0.5, seed=seed)
    ptr = [0]
    rows, cols, vals = [], [], []

    def push(entries):
        for r, c, v in entries:
            rows.append(r)
            cols.append(c)
            vals.append(v)
            if r != c:
                rows.append(c)
                cols.append(r)
                vals.append(v)
        ptr.append(len(rows))

    push([(i, i, 1.0) for i in range(n)])
    for i, j in g.edge_list:
        push([(i, j, 1.0)])
    for i in range(n):
        for j in range(i, n):
            push([(i, j, 1.0)])
    return (
        np.asarray(ptr, dtype=np.int64),
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=np.float64),
    )


def bench_kernels(sizes, repeats):
    rng = np.random.default_rng(0)
    cases = []
    for n in sizes:
        sym = _symmetric(rng, n)
        spd = _spd(rng, n)
        rhs = rng.standard_normal((n, max(1, n // 2)))
        ptr, rows, cols, vals = _level_constraints(n, seed=n)
        x = _spd(rng, n) / n
        u = _spd(rng, n) / n
        cases.append((n, sym, spd, rhs, (ptr, rows, cols, vals), x, u))

    names = ["jacobi_eigh", "cholesky", "triangular_solve", "schur_assemble"]
    results = {name: {} for name in names}
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        kernels.warm_up()
        for n, sym, spd, rhs, cons, x, u in cases:
            ptr, rows, cols, vals = cons
            lower, _ = kernels.chol_factor(spd, 0.0)
            timers = {
                "jacobi_eigh": lambda: kernels.jacobi_eigh(sym, True),
                "cholesky": lambda: kernels.chol_factor(spd, 0.0),
                "triangular_solve": lambda: kernels.solve_lower(lower, rhs),
                "schur_assemble": lambda: kernels.schur_assemble(ptr, rows, cols, vals, x, u),
            }
            for name in names:
                results[name].setdefault(n, {})[backend] = _time_best(timers[name], repeats)
    return results


def bench_end_to_end(repeats):
    jobs = [("theta_k(C5, k=2.5)", cycle(5), 2.5),
            ("theta_k(G(12,1/2), k=3)", erdos_renyi(12, 0.5, seed=4), 3.0),
            ("theta_k(Kneser(7,3), k=7/3)", kneser(7, 3), 7.0 / 3.0)]
    table = {}
    for backend in ("numba", "numpy"):
        kernels.set_backend(backend)
        kernels.warm_up()
        for label, g, k in jobs:
            w = np.ones(g.n)
            reps = 1 if g.n > 20 else repeats
            table.setdefault(label, {})[backend] = _time_best(lambda: theta_k(g, w, k), reps)
    return table


def _print_table(title, rows, key_header):
    print(f"\n{title}")
    print(f"  {key_header:<28} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for key, entry in rows.items():
        nb, np_ = entry["numba"], entry["numpy"]
        print(f"  {str(key):<28} {nb * 1e3:>10.3f}ms {np_ * 1e3:>10.3f}ms {np_ / nb:>8.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="10,30,60",
                        help="comma-separated matrix sizes for the kernel table")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"kernel backends: numba vs numpy fallback (sizes {sizes}, best of {args.repeats})")
    results = bench_kernels(sizes, args.repeats)
    for name, rows in results.items():
        _print_table(f"kernel: {name}", rows, "matrix size")

    print("\nend-to-end level solves")
    table = bench_end_to_end(args.repeats)
    _print_table("theta level solve", table, "instance")
    kernels.set_backend("auto")


if __name__ == "__main__":
    main()
