"""Time the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 5000] [--degree 10] [--repeat 3]

Prints one row per kernel with the best wall time of each backend and the
speedup. Outputs of both backends are compared before timing.
"""

import argparse
import time

import numpy as np

from geocore._backend import backends
from geocore.generators import gnm
from geocore.graph import largest_component


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def cases(g, rng):
    ptr, nbr = g.indptr, g.indices
    seeds = np.zeros(g.n, dtype=np.uint8)
    seeds[rng.choice(g.n, size=min(g.n, 10), replace=False)] = 1
    src = np.flatnonzero(seeds).astype(np.int32)

    def dfs_args(k):
        adj = k.shuffle_neighbors(ptr, nbr, 12345)
        parent, depth, order, tin, _, first = k.dfs_tree(ptr, adj, 0)
        return ptr, adj, parent, depth, order, tin, first

    return {
        "bfs": lambda k: k.bfs(ptr, nbr, 0),
        "shuffle_neighbors": lambda k: k.shuffle_neighbors(ptr, nbr, 12345),
        "dfs_tree": lambda k: k.dfs_tree(ptr, nbr, 0),
        "outerplanar_pass": lambda k, a=dfs_args: k.outerplanar_pass(*a(k)),
        "biconnected_components": lambda k: k.biconnected_components(ptr, nbr),
        "interval_union": lambda k: k.interval_union(ptr, nbr, src, seeds),
        "closure_exact": lambda k: k.closure_exact(ptr, nbr, seeds),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5_000)
    ap.add_argument("--degree", type=float, default=10.0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = largest_component(gnm(args.n, int(args.n * args.degree / 2), args.seed))
    found = backends()
    print(f"graph n={g.n} m={g.m}; backends: {', '.join(found)}")
    if "cython" not in found:
        print("compiled extension not built; only the fallback is available")
    names = list(found)
    print(f"{'kernel':<24}" + "".join(f"{b + ' ms':>14}" for b in names) + f"{'speedup':>10}")
    rng = np.random.default_rng(args.seed)
    for name, call in cases(g, rng).items():
        times, outs = [], []
        for b in names:
            t, out = best_of(lambda: call(found[b]), args.repeat)
            times.append(t)
            outs.append(out)
        if not all(same(outs[0], o) for o in outs[1:]):
            raise SystemExit(f"{name}: backends disagree")
        speed = f"{times[-1] / times[0]:.1f}x" if len(times) > 1 else "-"
        print(f"{name:<24}" + "".join(f"{t * 1e3:>14.2f}" for t in times) + f"{speed:>10}")


if __name__ == "__main__":
    main()
