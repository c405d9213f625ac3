"""Compare the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both variants are imported side by side, so MOMAPF_DISABLE_NUMBA does not
matter here. The first numba call (compilation or cache load) is timed
separately and excluded from the steady-state numbers. Also times one joint
oracle run end to end with each variant.
"""
import argparse
import time

import numpy as np

from momapf import kernels, oracle
from momapf.instance import CostModelSpec, Instance, make_random_scen, parse_scen
from momapf.model import GridGraph


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def joint_labels(n_agents, n_rows, seed=0):
    g = GridGraph.open(6, 6)
    rng = np.random.default_rng(seed)
    V, base = g.n_cells, 2**n_agents
    pos = np.stack([rng.permutation(V)[:n_agents] for _ in range(n_rows)])
    keys = (pos * V ** np.arange(n_agents)).sum(axis=1) * base
    costs = rng.integers(0, 20, size=(n_rows, 2)).astype(np.int64)
    inst_costs = np.ascontiguousarray(
        Instance.build(g, parse_scen(make_random_scen(g, 1, 0), g), CostModelSpec("random", 2, 5, 0)).costs.table
    )
    return g, keys.astype(np.int64), costs, inst_costs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    r = args.repeat
    rows = []

    g = GridGraph.open(64, 64)
    col = np.ones((g.n_cells, 5), dtype=np.int64)
    cases = [("backward_dijkstra 64x64", kernels.backward_dijkstra_numba, kernels.backward_dijkstra_numpy, (g.nbr, col, 0))]

    rng = np.random.default_rng(1)
    keys = np.sort(rng.integers(0, 2000, 200_000)).astype(np.int64)
    costs = rng.integers(0, 30, size=(200_000, 2)).astype(np.int64)
    order, _ = kernels.pareto_prune(keys, costs)
    cases.append(("group_pareto_keep 200k rows", kernels.group_pareto_keep_numba, kernels.group_pareto_keep_numpy,
                  (keys[order], costs[order])))

    front = rng.integers(0, 30, size=(40, 2)).astype(np.int64)
    cases.append(("dominated_by_front 200k x 40", kernels.dominated_by_front_numba, kernels.dominated_by_front_numpy,
                  (costs, front)))

    jg, jkeys, jcosts, table = joint_labels(3, 20_000)
    cases.append(("joint_expand N=3, 20k labels", kernels.joint_expand_numba, kernels.joint_expand_numpy,
                  (jkeys, jcosts, jg.nbr, table, 3, jg.n_cells)))

    for name, nb, npy, a in cases:
        t = time.perf_counter()
        nb(*a)
        first = time.perf_counter() - t
        rows.append((name, first, best_of(lambda: nb(*a), r), best_of(lambda: npy(*a), r)))

    g = GridGraph.open(5, 5)
    inst = Instance.build(g, parse_scen(make_random_scen(g, 3, 7), g), CostModelSpec("random", 2, 5, 7))
    timings = {}
    for label, variant in (("numba", "numba"), ("numpy", "numpy")):
        saved = {k: getattr(kernels, k) for k in ("group_pareto_keep", "dominated_by_front", "joint_expand")}
        for k in saved:
            setattr(kernels, k, getattr(kernels, f"{k}_{variant}"))
        try:
            timings[label] = best_of(lambda: oracle.joint_front_bruteforce(g, inst.costs, inst.starts, inst.goals, 16), 1)
        finally:
            for k, v in saved.items():
                setattr(kernels, k, v)
    rows.append(("joint oracle 5x5 N=3 T=16", float("nan"), timings["numba"], timings["numpy"]))

    print(f"{'kernel':34s} {'first numba':>12s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, first, t_nb, t_np in rows:
        head = "-" if first != first else f"{first * 1e3:.1f}ms"
        print(f"{name:34s} {head:>12s} {t_nb * 1e3:8.2f}ms {t_np * 1e3:8.2f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
