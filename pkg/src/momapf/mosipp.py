"""Multi-objective safe-interval path planning among dynamic obstacles.

States are (vertex, safe interval); labels carry a cost vector and an arrival
time. A label is discarded when another label at the same state has a cost
that is no worse and an arrival that is no later.

Exactness caveat: that pruning rule, and generating only the earliest arrival
into each successor interval, assume waiting never trades one objective
against another. Concretely, for every objective m either all wait costs are
0, or every action (move or wait) costs the same constant in m (a "time"
objective). :func:`waits_are_benign` checks this; with other cost tables the
result is a valid set of non-dominated trajectories but may miss some.
"""
from __future__ import annotations

import heapq
import json
import logging
import math
from dataclasses import dataclass
from itertools import count
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .lowlevel import HeuristicTable, build_heuristic
from .model import EdgeCosts, GridGraph, UsageError, dominates_or_equal, weakly_dominated_by_any

log = logging.getLogger(__name__)

FOREVER = math.inf


class SafeInterval(NamedTuple):
    begin: int
    end: float  # int or FOREVER


class SippState(NamedTuple):
    vertex: int
    begin: int
    end: float

    @property
    def interval(self) -> SafeInterval:
        return SafeInterval(self.begin, self.end)


@dataclass
class ObstacleTrajectory:
    """Occupies ``path[k]`` at time ``start_time + k``; with ``stays`` it keeps the last vertex forever."""

    start_time: int
    path: list
    stays: bool = False

    def occupancy(self):
        return [(v, self.start_time + k) for k, v in enumerate(self.path)]


def load_obstacles(text_or_obj) -> list:
    """Parse ``[{vertex, start_time, path, stays}]``; ``path`` defaults to ``[vertex]``."""
    doc = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    out = []
    for item in doc:
        path = item.get("path") or [item["vertex"]]
        if "vertex" in item and item["vertex"] != path[0]:
            raise ValueError(f"obstacle vertex {item['vertex']} does not match path start {path[0]}")
        out.append(ObstacleTrajectory(int(item.get("start_time", 0)), [int(v) for v in path], bool(item.get("stays", False))))
    return out


def dump_obstacles(obstacles) -> str:
    return json.dumps(
        [{"vertex": o.path[0], "start_time": o.start_time, "path": list(o.path), "stays": o.stays} for o in obstacles]
    )


def compute_safe_intervals(graph: GridGraph, obstacles: Sequence[ObstacleTrajectory], horizon=None) -> dict:
    """Maximal unoccupied intervals per vertex, sorted. ``horizon`` only bounds validation."""
    times: dict = {}
    forever_from: dict = {}
    for ob in obstacles:
        for v, t in ob.occupancy():
            if horizon is not None and t > horizon:
                raise ValueError(f"occupancy at time {t} beyond horizon {horizon}")
            times.setdefault(v, set()).add(t)
        if ob.stays and ob.path:
            v, t = ob.path[-1], ob.start_time + len(ob.path) - 1
            forever_from[v] = min(t, forever_from.get(v, t))
    out = {}
    for v in graph.vertices:
        occ = sorted(times.get(v, ()))
        stop = forever_from.get(v)
        ivs = []
        begin = 0
        for t in occ:
            if stop is not None and t >= stop:
                break
            if t > begin:
                ivs.append(SafeInterval(begin, t - 1))
            begin = t + 1
        if stop is None:
            ivs.append(SafeInterval(begin, FOREVER))
        elif stop > begin:
            ivs.append(SafeInterval(begin, stop - 1))
        out[v] = ivs
    return out


class Label:
    __slots__ = ("state", "g", "t", "parent", "alive")

    def __init__(self, state: SippState, g, t: int, parent=None):
        self.state = state
        self.g = tuple(g)
        self.t = t
        self.parent = parent
        self.alive = True

    def __repr__(self):
        return f"Label({tuple(self.state)}, g={self.g}, t={self.t})"


def label_dominates(l: Label, l2: Label) -> bool:
    if l.state != l2.state:
        raise UsageError("label dominance is only defined for labels at the same state")
    return l.t <= l2.t and dominates_or_equal(l.g, l2.g)


class LabelFrontier:
    """Per-state antichain of labels (alpha)."""

    def __init__(self):
        self.by_state: dict = {}

    def __getitem__(self, s):
        return self.by_state.get(s, [])

    def check_and_insert(self, l2: Label) -> bool:
        """True if ``l2`` is label-dominated and must be dropped; otherwise insert it,
        evicting (and killing in OPEN) every label it dominates."""
        bucket = self.by_state.setdefault(l2.state, [])
        g2, t2 = l2.g, l2.t
        for l in bucket:
            if l.t <= t2 and all(x <= y for x, y in zip(l.g, g2)):
                return True
        keep = []
        for l in bucket:
            if t2 <= l.t and all(x <= y for x, y in zip(g2, l.g)):
                l.alive = False
            else:
                keep.append(l)
        keep.append(l2)
        self.by_state[l2.state] = keep
        return False


def get_successors(label: Label, intervals: dict, costs: EdgeCosts, horizon=None) -> list:
    """Earliest-arrival successor labels into every reachable neighbouring safe interval."""
    v, _, t_end = label.state
    tr = label.t
    out = []
    wait = costs.wait_cost(v)
    for w, c in costs.succ[v][1:]:
        for iv in intervals.get(w, ()):
            t1 = max(tr + 1, iv.begin)
            if t1 > iv.end or t1 - 1 > t_end:
                continue
            if horizon is not None and t1 > horizon:
                continue
            k = t1 - tr - 1
            g1 = tuple(a + k * b + d for a, b, d in zip(label.g, wait, c))
            out.append(Label(SippState(w, iv.begin, iv.end), g1, t1, label))
    return out


def reconstruct(label: Label) -> tuple:
    """Vertex per time step from 0 to the label's arrival, waits made explicit."""
    chain = []
    while label is not None:
        chain.append(label)
        label = label.parent
    chain.reverse()
    path = [chain[0].state.vertex] * (chain[0].t + 1)
    for prev, cur in zip(chain, chain[1:]):
        path.extend([prev.state.vertex] * (cur.t - prev.t - 1))
        path.append(cur.state.vertex)
    return tuple(path)


def waits_are_benign(costs: EdgeCosts) -> bool:
    tab = costs.table
    valid = costs.graph.nbr >= 0
    for m in range(costs.m):
        waits = tab[:, 0, m][valid[:, 0]]
        if not waits.any():
            continue
        vals = tab[:, :, m][valid]
        if vals.min() != vals.max():
            return False
    return True


def mosipp_solve(
    graph: GridGraph,
    costs: EdgeCosts,
    obstacles: Sequence[ObstacleTrajectory],
    start: int,
    goal: int,
    h: Optional[HeuristicTable] = None,
    horizon: Optional[int] = None,
    stats: Optional[dict] = None,
) -> list:
    """All cost-unique Pareto-optimal trajectories ``[(path, cost)]`` from ``start`` at time 0 to ``goal``.

    Reaching the goal ends the trajectory (no requirement to stay there).
    ``horizon`` optionally caps the arrival time.
    """
    if not waits_are_benign(costs):
        log.warning("wait costs trade off objectives; MO-SIPP may miss Pareto-optimal trajectories")
    intervals = compute_safe_intervals(graph, obstacles)
    first = intervals.get(start, [])
    if not first or first[0].begin != 0:
        return []
    if h is None:
        h = build_heuristic(graph, costs, goal)
    hv = h.vectors
    s0 = SippState(start, first[0].begin, first[0].end)
    l0 = Label(s0, (0,) * costs.m, 0)
    alpha = LabelFrontier()
    alpha.check_and_insert(l0)
    tie = count()
    heap = [(hv[start], 0, next(tie), l0)]
    sols: list = []
    sol_costs: list = []
    n_exp = n_filtered = 0
    while heap:
        _, _, _, l = heapq.heappop(heap)
        if not l.alive:
            continue
        if weakly_dominated_by_any(l.g, sol_costs):
            n_filtered += 1
            continue
        if l.state.vertex == goal:
            sols.append((reconstruct(l), l.g))
            sol_costs.append(l.g)
            # FilterOpen
            for entry in heap:
                other = entry[3]
                if other.alive and all(x <= y for x, y in zip(l.g, other.g)):
                    other.alive = False
                    n_filtered += 1
            continue
        n_exp += 1
        for l2 in get_successors(l, intervals, costs, horizon):
            if not h.reachable[l2.state.vertex]:
                continue
            if alpha.check_and_insert(l2):
                continue
            f2 = tuple(a + b for a, b in zip(l2.g, hv[l2.state.vertex]))
            heapq.heappush(heap, (f2, l2.t, next(tie), l2))
    if stats is not None:
        stats.update(expansions=n_exp, filtered=n_filtered)
    return sols
