"""Time each kernel compiled with numba against its plain-Python body.

    python benchmarks/bench_kernels.py [--n 300] [--p 0.02] [--repeat 3]

The compiled call is warmed up once so JIT time is excluded; both paths are
checked for equal output before timing.
"""

import argparse
import time

import numpy as np
import scipy.linalg

from herd import _accel, _kernels
from herd.synthetic import strongly_connected


def best_time(func, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(n, p, seed):
    g = strongly_connected(n, p, seed)
    indptr, indices = g.csr
    rng = np.random.default_rng(seed)
    m = min(n, 40)
    A = rng.normal(size=(m, m)) - 4 * m ** 0.5 * np.eye(m)
    B = rng.normal(size=(m, 1))
    x, w = np.polynomial.legendre.leggauss(10)
    h = 0.05
    E_nodes = np.stack([scipy.linalg.expm(A * s) for s in 0.5 * h * (x + 1)])
    E_panel = scipy.linalg.expm(A * h)
    return [
        ("reach_mask", _kernels.reach_mask, (indptr, indices, g.n, np.array([0], dtype=np.int64))),
        ("tarjan_scc", _kernels.tarjan_scc, (indptr, indices, g.n)),
        ("union_find", _kernels.union_find_components, (g.n, g.src, g.dst)),
        ("hopcroft_karp", _kernels.hopcroft_karp, (g.n, g.n, indptr, indices)),
        ("bfs_all_pairs", _kernels.bfs_all_pairs, (indptr, indices, g.n)),
        ("brandes", _kernels.brandes_betweenness, (indptr, indices, g.n)),
        ("rk4_linear", _kernels.rk4_linear, (A, B, rng.normal(size=(4001, 1)), 1e-3, np.zeros(m))),
        ("gl_gramian", _kernels.gl_gramian_accumulate, (E_panel, E_nodes, 0.5 * h * w, B, 200)),
        ("backward_prop", _kernels.backward_propagate, (E_panel.T, rng.normal(size=m), 4000)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--p", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"backend: {_accel.backend()}  graph n={args.n} p={args.p}")
    if not _accel.NUMBA_ENABLED:
        print("numba disabled (HERD_NUMBA=0 or not installed); both columns time the same code")
    print(f"{'kernel':<15}{'numba [ms]':>12}{'python [ms]':>13}{'speedup':>10}")
    for name, kernel, kargs in cases(args.n, args.p, args.seed):
        fast = kernel(*kargs)
        slow = kernel.py_func(*kargs)
        if not isinstance(fast, tuple):
            fast, slow = (fast,), (slow,)
        for a, b in zip(fast, slow):
            if not np.allclose(a, b, rtol=1e-10, atol=1e-12):
                raise SystemExit(f"{name}: compiled and Python results differ")
        t_fast = best_time(kernel, kargs, args.repeat)
        t_slow = best_time(kernel.py_func, kargs, max(1, args.repeat // 3))
        print(f"{name:<15}{1e3 * t_fast:>12.3f}{1e3 * t_slow:>13.1f}{t_slow / t_fast:>9.1f}x")


if __name__ == "__main__":
    main()
