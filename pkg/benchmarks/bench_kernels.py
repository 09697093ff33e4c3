"""Timings for the accelerated kernels: numba twin vs pure numpy.

Usage: python benchmarks/bench_kernels.py [--sizes 256,1024,4096] [--reps 5]

Times the all-sources BFS on square tori and the two grouped prox maps
used inside the convex trade-off solver.  The numba column disappears
(with a note) when numba is not importable.
"""

import argparse
import time

import numpy as np

from gnlab import _kernels_np as knp
from gnlab.space import build_builtin

try:
    from gnlab import _kernels_numba as knb
except Exception:
    knb = None


def _time(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_bfs(n_side, reps):
    space = build_builtin("torus:%dx%d" % (n_side, n_side))
    indptr, indices = space.adj_indptr, space.adj_indices
    n = space.n
    out = {"numpy": _time(lambda: knp.bfs_all_sources(indptr, indices, n), reps)}
    if knb is not None:
        knb.bfs_all_sources(indptr, indices, n)  # compile outside the clock
        out["numba"] = _time(lambda: knb.bfs_all_sources(indptr, indices, n), reps)
    return n, out


def bench_prox(n_groups, reps):
    rng = np.random.default_rng(0)
    lengths = rng.integers(2, 7, size=n_groups)
    indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    v = rng.normal(size=indptr[-1]) * 2.0
    sigma = rng.uniform(0.1, 2.0, size=n_groups)
    res = {}
    for name, fn in (("linf", "group_prox_linf"), ("sqmax", "group_prox_sqmax")):
        res[name] = {"numpy": _time(lambda f=getattr(knp, fn): f(v.copy(), indptr, sigma), reps)}
        if knb is not None:
            jit = getattr(knb, fn)
            jit(v.copy(), indptr, sigma)
            res[name]["numba"] = _time(lambda f=jit: f(v.copy(), indptr, sigma), reps)
    return indptr[-1], res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="16,32,64", help="torus side lengths")
    ap.add_argument("--groups", default="1000,100000", help="prox group counts")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    if knb is None:
        print("numba unavailable; timing the numpy backend only")

    print("\nall-sources BFS (square torus)")
    print("%10s %10s %12s %12s %8s" % ("side", "vertices", "numpy [s]", "numba [s]", "ratio"))
    for side in (int(s) for s in args.sizes.split(",")):
        n, res = bench_bfs(side, args.reps)
        ratio = res["numpy"] / res["numba"] if "numba" in res else float("nan")
        print(
            "%10d %10d %12.4f %12s %8s"
            % (
                side,
                n,
                res["numpy"],
                "%.4f" % res["numba"] if "numba" in res else "-",
                "%.1fx" % ratio if ratio == ratio else "-",
            )
        )

    print("\ngrouped prox maps")
    print("%10s %10s %8s %12s %12s %8s" % ("groups", "values", "kind", "numpy [s]", "numba [s]", "ratio"))
    for g in (int(s) for s in args.groups.split(",")):
        total, res = bench_prox(g, args.reps)
        for kind, r in res.items():
            ratio = r["numpy"] / r["numba"] if "numba" in r else float("nan")
            print(
                "%10d %10d %8s %12.5f %12s %8s"
                % (
                    g,
                    total,
                    kind,
                    r["numpy"],
                    "%.5f" % r["numba"] if "numba" in r else "-",
                    "%.1fx" % ratio if ratio == ratio else "-",
                )
            )


if __name__ == "__main__":
    main()
