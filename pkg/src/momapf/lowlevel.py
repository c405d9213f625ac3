"""Constraint-aware single-agent multi-objective search over the time-expanded graph.

Two planners share one contract: given an agent's constraints, return every
cost-unique Pareto-optimal consistent path from start (time 0) to goal with
arrival time <= horizon. ``namoa_dr_st`` works for any number of objectives,
``boa_st`` only for two.
"""
from __future__ import annotations

import heapq
from itertools import count
from typing import Iterable, NamedTuple, Optional

import numpy as np

from . import kernels
from .model import EdgeCosts, GridGraph, UsageError, weakly_dominated_by_any

INF = int(kernels.INF)


class Constraint(NamedTuple):
    """``ua == ub``: agent may not be at ``ua`` at time ``t``.
    Otherwise: agent may not move ``ua -> ub`` between ``t`` and ``t + 1``."""

    agent: int
    ua: int
    ub: int
    t: int

    @property
    def is_vertex(self) -> bool:
        return self.ua == self.ub


class ConstraintTable:
    """Hash lookups for one agent's constraints."""

    __slots__ = ("vertex", "edge", "last_at")

    def __init__(self, constraints: Iterable[Constraint] = ()):
        self.vertex = set()
        self.edge = set()
        self.last_at = {}
        for c in constraints:
            if c.is_vertex:
                self.vertex.add((c.ua, c.t))
                if c.t > self.last_at.get(c.ua, -1):
                    self.last_at[c.ua] = c.t
            else:
                self.edge.add((c.ua, c.ub, c.t))

    def allows(self, u: int, w: int, t: int) -> bool:
        if (w, t + 1) in self.vertex:
            return False
        return u == w or (u, w, t) not in self.edge

    def can_stay_from(self, v: int, t: int) -> bool:
        """No vertex constraint at ``v`` after time ``t``."""
        return self.last_at.get(v, -1) <= t


def consistent(u: int, t: int, w: int, constraints) -> bool:
    """Whether moving from (u, t) to (w, t+1) respects ``constraints`` (a table or an iterable)."""
    if not isinstance(constraints, ConstraintTable):
        constraints = ConstraintTable(constraints)
    return constraints.allows(u, w, t)


def path_consistent(path, constraints) -> bool:
    table = constraints if isinstance(constraints, ConstraintTable) else ConstraintTable(constraints)
    if (path[0], 0) in table.vertex:
        return False
    for t in range(len(path) - 1):
        if not table.allows(path[t], path[t + 1], t):
            return False
    return table.can_stay_from(path[-1], len(path) - 1)


class HeuristicTable:
    """Per-vertex lower bounds on cost-to-goal, one backward Dijkstra per objective."""

    def __init__(self, values: np.ndarray, goal: int):
        self.values = values  # (n_cells, M), INF where unreachable
        self.goal = goal
        self.vectors = [tuple(int(x) for x in row) for row in values]
        self.reachable = [bool((row < INF).all()) for row in values]

    def __getitem__(self, v: int):
        return self.vectors[v]


def build_heuristic(graph: GridGraph, costs: EdgeCosts, goal: int) -> HeuristicTable:
    if not graph.is_vertex(goal):
        raise UsageError(f"goal {goal} is not a vertex")
    vals = np.stack(
        [kernels.backward_dijkstra(graph.nbr, np.ascontiguousarray(costs.table[:, :, m]), goal) for m in range(costs.m)],
        axis=1,
    )
    return HeuristicTable(vals, goal)


class _Label:
    __slots__ = ("v", "t", "g", "parent")

    def __init__(self, v, t, g, parent):
        self.v = v
        self.t = t
        self.g = g
        self.parent = parent


def _reconstruct(lab: _Label) -> tuple:
    out = []
    while lab is not None:
        out.append(lab.v)
        lab = lab.parent
    return tuple(reversed(out))


def _prepare(graph, costs, start, goal, constraints, h):
    table = constraints if isinstance(constraints, ConstraintTable) else ConstraintTable(constraints)
    if h is None:
        h = build_heuristic(graph, costs, goal)
    return table, h


def namoa_dr_st(
    graph: GridGraph,
    costs: EdgeCosts,
    start: int,
    goal: int,
    constraints=(),
    h: Optional[HeuristicTable] = None,
    horizon: int = 64,
    stats: Optional[dict] = None,
) -> list:
    """NAMOA* with dimensionality reduction on G x {0..horizon}.

    Returns ``[(path, cost)]`` in lexicographic cost order.
    """
    table, h = _prepare(graph, costs, start, goal, constraints, h)
    if (start, 0) in table.vertex or not h.reachable[start]:
        return []
    hv, succ = h.vectors, costs.succ
    m = costs.m
    tie = count()
    g0 = (0,) * m
    heap = [(hv[start], 0, next(tie), _Label(start, 0, g0, None))]
    closed: dict = {}  # (v, t) -> truncated costs of expanded labels
    sols: list = []
    sols_tr: list = []
    n_exp = 0
    while heap:
        f, t, _, lab = heapq.heappop(heap)
        g, v = lab.g, lab.v
        if weakly_dominated_by_any(f[1:], sols_tr):
            continue
        g_tr = g[1:]
        cl = closed.get((v, t))
        if cl is not None:
            if weakly_dominated_by_any(g_tr, cl):
                continue
            cl[:] = [c for c in cl if not all(x <= y for x, y in zip(g_tr, c))]
            cl.append(g_tr)
        else:
            closed[(v, t)] = [g_tr]
        if v == goal and table.can_stay_from(v, t):
            sols.append((_reconstruct(lab), g))
            sols_tr.append(g_tr)
            continue
        if t >= horizon:
            continue
        n_exp += 1
        t1 = t + 1
        for w, c in succ[v]:
            if not table.allows(v, w, t) or not h.reachable[w]:
                continue
            g2 = tuple(x + y for x, y in zip(g, c))
            f2 = tuple(x + y for x, y in zip(g2, hv[w]))
            if weakly_dominated_by_any(f2[1:], sols_tr):
                continue
            cl2 = closed.get((w, t1))
            if cl2 is not None and weakly_dominated_by_any(g2[1:], cl2):
                continue
            heapq.heappush(heap, (f2, t1, next(tie), _Label(w, t1, g2, lab)))
    if stats is not None:
        stats["expansions"] = stats.get("expansions", 0) + n_exp
        stats["closed"] = closed
    return sols


def boa_st(
    graph: GridGraph,
    costs: EdgeCosts,
    start: int,
    goal: int,
    constraints=(),
    h: Optional[HeuristicTable] = None,
    horizon: int = 64,
    stats: Optional[dict] = None,
) -> list:
    """Bi-objective A* on G x {0..horizon}; same return contract as :func:`namoa_dr_st`."""
    if costs.m != 2:
        raise UsageError(f"boa_st needs exactly 2 objectives, got {costs.m}")
    table, h = _prepare(graph, costs, start, goal, constraints, h)
    if (start, 0) in table.vertex or not h.reachable[start]:
        return []
    hv, succ = h.vectors, costs.succ
    tie = count()
    heap = [(hv[start], 0, next(tie), _Label(start, 0, (0, 0), None))]
    g2min: dict = {}
    goal_min = INF
    sols = []
    n_exp = 0
    while heap:
        f, t, _, lab = heapq.heappop(heap)
        g, v = lab.g, lab.v
        if g[1] >= g2min.get((v, t), INF) or f[1] >= goal_min:
            continue
        g2min[(v, t)] = g[1]
        if v == goal and table.can_stay_from(v, t):
            sols.append((_reconstruct(lab), g))
            goal_min = g[1]
            continue
        if t >= horizon:
            continue
        n_exp += 1
        t1 = t + 1
        for w, c in succ[v]:
            if not table.allows(v, w, t) or not h.reachable[w]:
                continue
            ga, gb = g[0] + c[0], g[1] + c[1]
            hw = hv[w]
            if gb >= g2min.get((w, t1), INF) or gb + hw[1] >= goal_min:
                continue
            heapq.heappush(heap, ((ga + hw[0], gb + hw[1]), t1, next(tie), _Label(w, t1, (ga, gb), lab)))
    if stats is not None:
        stats["expansions"] = stats.get("expansions", 0) + n_exp
    return sols


PLANNERS = {"namoa-dr": namoa_dr_st, "boa": boa_st}
