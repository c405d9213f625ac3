"""Brute-force reference solvers used to cross-check the planners.

Both oracles sweep the time-expanded graph layer by layer (t = 0..horizon)
and keep, for every exact search state at a given time, the set of distinct
non-dominated cost vectors that reach it. Two partial solutions in the same
state at the same time have identical feasible futures, so this collapse
loses nothing; no heuristic, ordering or label-dominance argument is
involved. Partial costs are also dropped once a completed solution is no
worse (costs are non-negative). Collision and goal-stay rules are written
out here independently of the planner modules.
"""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from . import kernels
from .model import EdgeCosts, GridGraph, pareto_front, weakly_dominated_by_any


class OracleTooBig(RuntimeError):
    pass


def _pareto_with_witness(cands):
    """``cands``: iterable of (cost, witness). Returns [(cost, witness)] for the cost-unique front, first witness kept."""
    first = {}
    for c, w in cands:
        first.setdefault(tuple(c), w)
    return [(c, first[c]) for c in pareto_front(first)]


def _blockers(constraints, obstacles, horizon):
    vblock, eblock = set(), set()
    for c in constraints or ():
        # (agent, ua, ub, t)
        ua, ub, t = c[1], c[2], c[3]
        if ua == ub:
            vblock.add((ua, t))
        else:
            eblock.add((ua, ub, t))
    for ob in obstacles or ():
        for k, v in enumerate(ob.path):
            vblock.add((v, ob.start_time + k))
        if ob.stays and ob.path:
            last = ob.start_time + len(ob.path) - 1
            for t in range(last, horizon + 2):
                vblock.add((ob.path[-1], t))
    return vblock, eblock


def single_agent_front_bruteforce(
    graph: GridGraph,
    costs: EdgeCosts,
    start: int,
    goal: int,
    horizon: int,
    constraints=(),
    obstacles=(),
    hold_goal: bool = True,
    exhaustive: bool = False,
) -> list:
    """Exact cost-unique Pareto front ``[(cost, path)]`` over all feasible timed paths with arrival <= horizon.

    ``hold_goal``: the agent must be able to stay at the goal forever after
    arriving (constraint semantics). ``exhaustive`` switches to a plain
    depth-first enumeration of every timed path, for tiny horizons only.
    """
    vblock, eblock = _blockers(constraints, obstacles, horizon)
    last_goal_block = max((t for v, t in vblock if v == goal), default=-1)

    def can_finish(t):
        return not hold_goal or last_goal_block <= t

    def moves(v):
        out = [(v, costs.cost(v, v))]
        for w in graph.neighbors(v):
            out.append((w, costs.cost(v, w)))
        return out

    if (start, 0) in vblock:
        return []
    zero = (0,) * costs.m

    if exhaustive:
        found = []

        def dfs(path, g):
            t = len(path) - 1
            v = path[-1]
            if v == goal and can_finish(t):
                found.append((g, tuple(path)))
            if t == horizon:
                return
            for w, c in moves(v):
                if (w, t + 1) in vblock or (v != w and (v, w, t) in eblock):
                    continue
                path.append(w)
                dfs(path, tuple(a + b for a, b in zip(g, c)))
                path.pop()

        dfs([start], zero)
        return _pareto_with_witness(found)

    layer = {start: [(zero, (start,))]}
    sols = []
    sol_costs = []
    for t in range(horizon + 1):
        if goal in layer and can_finish(t):
            for g, p in layer[goal]:
                sols.append((g, p))
                sol_costs.append(g)
        if t == horizon:
            break
        nxt: dict = {}
        for v, labels in layer.items():
            for w, c in moves(v):
                if (w, t + 1) in vblock or (v != w and (v, w, t) in eblock):
                    continue
                for g, p in labels:
                    g2 = tuple(a + b for a, b in zip(g, c))
                    if weakly_dominated_by_any(g2, sol_costs):
                        continue
                    nxt.setdefault(w, []).append((g2, p + (w,)))
        layer = {w: _pareto_with_witness(labels) for w, labels in nxt.items()}
    return _pareto_with_witness(sols)


def joint_front_bruteforce(
    graph: GridGraph,
    costs: EdgeCosts,
    starts: Sequence[int],
    goals: Sequence[int],
    horizon: int,
    max_labels: int = 3_000_000,
    chunk_rows: int = 1 << 21,
) -> list:
    """Exact cost-unique Pareto front ``[(cost, joint_paths)]`` of conflict-free joint paths, every arrival <= horizon.

    Each agent pays for every action up to its arrival, after which it is
    parked at its goal (and still occupies it). Vertex collisions and edge
    swaps are forbidden at every step.
    """
    n = len(starts)
    V = graph.n_cells
    if n == 0:
        return []
    if len(set(starts)) < n:
        return []
    if float(V) ** n * 2**n >= 2**62:
        raise OracleTooBig(f"joint state space too large to encode: {V} cells, {n} agents")
    m = costs.m
    base = 2**n
    full = base - 1
    mul = np.array([V**a for a in range(n)], dtype=np.int64)
    goals_arr = np.asarray(goals, dtype=np.int64)
    ecost = np.ascontiguousarray(costs.table)
    nbr = graph.nbr

    def decode(keys):
        rest = keys // base
        pos = np.empty((keys.shape[0], n), dtype=np.int64)
        for a in range(n):
            pos[:, a] = rest % V
            rest = rest // V
        return pos, keys % base

    keys = np.array([int(np.dot(starts, mul)) * base], dtype=np.int64)
    lab_costs = np.zeros((1, m), dtype=np.int64)
    parent = np.array([-1], dtype=np.int64)
    history = []  # per layer: (keys, parent) after pruning
    sol_rows = []  # (layer, index)
    sol_front = np.zeros((0, m), dtype=np.int64)
    sol_cost_list = []
    for t in range(horizon + 1):
        # finishing: an active agent standing on its goal may park there for good
        pos, mask = decode(keys)
        for a in range(n):
            can = ((mask >> a) & 1 == 0) & (pos[:, a] == goals_arr[a])
            if can.any():
                keys = np.concatenate([keys, keys[can] + (1 << a)])
                lab_costs = np.concatenate([lab_costs, lab_costs[can]])
                parent = np.concatenate([parent, parent[can]])
                mask = keys % base
                pos = np.concatenate([pos, pos[can]])
        order, keep = kernels.pareto_prune(keys, lab_costs)
        sel = order[keep]
        keys, lab_costs, parent = keys[sel], lab_costs[sel], parent[sel]
        if sol_front.shape[0]:
            ok = ~kernels.dominated_by_front(lab_costs, sol_front)
            keys, lab_costs, parent = keys[ok], lab_costs[ok], parent[ok]
        if keys.shape[0] > max_labels:
            raise OracleTooBig(f"{keys.shape[0]} labels at t={t}")
        history.append((keys, parent))
        done = keys % base == full
        for idx in np.flatnonzero(done):
            sol_rows.append((t, int(idx)))
            sol_cost_list.append(tuple(int(x) for x in lab_costs[idx]))
        if done.any():
            sol_front = np.array(pareto_front(sol_cost_list), dtype=np.int64).reshape(-1, m)
        active = ~done
        keys, lab_costs = keys[active], lab_costs[active]
        local = np.flatnonzero(active)
        if t == horizon or keys.shape[0] == 0:
            break
        # expand in chunks, pruning each chunk, so memory stays bounded by the surviving labels
        step = max(1, chunk_rows // 5**n)
        parts = []
        for lo in range(0, keys.shape[0], step):
            ck, cc, cp = kernels.joint_expand(keys[lo : lo + step], lab_costs[lo : lo + step], nbr, ecost, n, V)
            order, keep = kernels.pareto_prune(ck, cc)
            sel = order[keep]
            ck, cc, cp = ck[sel], cc[sel], cp[sel] + lo
            if sol_front.shape[0]:
                ok = ~kernels.dominated_by_front(cc, sol_front)
                ck, cc, cp = ck[ok], cc[ok], cp[ok]
            parts.append((ck, cc, cp))
            if sum(p[0].shape[0] for p in parts) > max_labels:
                raise OracleTooBig(f"more than {max_labels} labels at t={t + 1}")
        keys = np.concatenate([p[0] for p in parts])
        lab_costs = np.concatenate([p[1] for p in parts]).reshape(-1, m)
        parent = local[np.concatenate([p[2] for p in parts])]

    def witness(t, idx):
        rows = []
        while t >= 0:
            k, par = history[t]
            rows.append(int(k[idx]))
            idx = int(par[idx])
            t -= 1
        rows.reverse()
        arr = np.array(rows, dtype=np.int64)
        pos, mask = decode(arr)
        paths = []
        for a in range(n):
            arrival = int(np.flatnonzero((mask >> a) & 1)[0])
            paths.append(tuple(int(v) for v in pos[: arrival + 1, a]))
        return tuple(paths)

    cands = [(c, (t, i)) for c, (t, i) in zip(sol_cost_list, sol_rows)]
    return [(c, witness(*w)) for c, w in _pareto_with_witness(cands)]


def costs_of(result) -> set:
    return {tuple(int(x) for x in c) for c, _ in result}
