#!/usr/bin/env python3
"""Benchmark the compiled chain kernel against the pure-Python fallback.

Runs the same chain (same network, seed, and iteration budget) through both
kernels, checks the outputs are bit-identical, and reports proposals/second.

    python benchmarks/bench_backends.py --nodes 100 --edges 5000 --iters 200000
"""

import argparse
import time

import numpy as np

from hierarchyrank import _mvr_py
from hierarchyrank.mvr import initial_ranking
from hierarchyrank.synth import PlantedConfig, generate_planted

try:
    from hierarchyrank import _mvr_c
except ImportError:
    _mvr_c = None


def _time_kernel(kernel, args, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nodes", type=int, default=100)
    ap.add_argument("--edges", type=int, default=5000)
    ap.add_argument("--iters", type=int, default=200_000)
    ap.add_argument("--pdown", type=float, default=0.9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3, help="timing repeats, best taken")
    opts = ap.parse_args()

    net, _ = generate_planted(PlantedConfig(
        n_nodes=opts.nodes, n_edges=opts.edges, p_down=opts.pdown, seed=opts.seed))
    init = (initial_ranking(net).rank_of.astype(np.int32) - 1).copy()
    burn_in = opts.iters // 5
    args = (net.n_nodes, *net.csr(), init, opts.iters, burn_in, 100, opts.seed, False)

    print(f"network: N={net.n_nodes}, distinct edges={net.n_edges}, "
          f"unit edges={net.total_weight}")
    print(f"chain: {opts.iters} proposals, burn-in {burn_in}\n")

    t_py, out_py = _time_kernel(_mvr_py.run_chain_kernel, args, opts.repeats)
    print(f"python fallback : {t_py:8.3f} s   {opts.iters / t_py / 1e6:8.2f} M proposals/s")

    if _mvr_c is None:
        print("compiled kernel : not built (pip install -e . to compile)")
        return

    t_c, out_c = _time_kernel(_mvr_c.run_chain_kernel, args, opts.repeats)
    print(f"compiled kernel : {t_c:8.3f} s   {opts.iters / t_c / 1e6:8.2f} M proposals/s")
    print(f"speedup         : {t_py / t_c:8.1f} x")

    same = (np.array_equal(out_py[0], out_c[0]) and np.array_equal(out_py[1], out_c[1]))
    print(f"outputs identical: {same}")
    if not same:
        raise SystemExit("backend mismatch: kernels disagree")


if __name__ == "__main__":
    main()
