"""Multi-objective conflict-based search (global and tree-by-tree node selection)."""
from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from itertools import count
from typing import Iterator, Optional

from .conflicts import Conflict, detect_first_conflict, split_conflict
from .instance import Instance
from .lowlevel import PLANNERS, ConstraintTable, build_heuristic
from .model import add, weakly_dominated_by_any, zero

log = logging.getLogger(__name__)

STRATEGIES = ("global", "tree-by-tree")


class Infeasible(RuntimeError):
    """Some agent has no path to its goal within the horizon, even unconstrained."""


@dataclass
class Metrics:
    n_root: int = 0
    n_conflict: int = 0
    n_filter_pop: int = 0
    n_filter_child: int = 0
    n_duplicate: int = 0
    n_sol: int = 0
    n_lowlevel: int = 0
    n_lowlevel_cached: int = 0
    peak_open: int = 0
    ms: float = 0.0

    @property
    def n_filter(self) -> int:
        return self.n_filter_pop + self.n_filter_child

    def to_json(self) -> dict:
        d = asdict(self)
        d["n_filter"] = self.n_filter
        return d


@dataclass(eq=False)
class HighLevelNode:
    cost: tuple
    paths: tuple
    path_costs: tuple
    constraints: tuple = ()
    tree: int = 0


class SolutionFront:
    """Cost-unique antichain of conflict-free joint paths."""

    def __init__(self):
        self.entries: dict = {}  # cost -> (paths, constraints)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, cost):
        return tuple(cost) in self.entries

    def costs(self) -> list:
        return sorted(self.entries)

    def items(self):
        return sorted(self.entries.items())

    def filter(self, cost) -> bool:
        """True when some stored cost is componentwise <= ``cost``."""
        return weakly_dominated_by_any(cost, self.entries)

    def update(self, cost, paths, constraints=()) -> None:
        cost = tuple(cost)
        for c in [c for c in self.entries if all(x <= y for x, y in zip(cost, c))]:
            del self.entries[c]
        self.entries[cost] = (paths, constraints)


def filter(node, front: SolutionFront) -> bool:  # noqa: A001 - mirrors the algorithm's name
    cost = node.cost if isinstance(node, HighLevelNode) else node
    return front.filter(cost)


def update_front(front: SolutionFront, node: HighLevelNode) -> SolutionFront:
    front.update(node.cost, node.paths, node.constraints)
    return front


class LowLevel:
    """Per-solve wrapper around a low-level planner with per-agent heuristics and memoised results."""

    def __init__(self, instance: Instance, planner: str = "boa", horizon: Optional[int] = None, metrics=None):
        if planner not in PLANNERS:
            raise ValueError(f"unknown low-level planner {planner!r}")
        self.instance = instance
        self.planner = PLANNERS[planner]
        self.name = planner
        self.horizon = default_horizon(instance) if horizon is None else horizon
        self.metrics = metrics if metrics is not None else Metrics()
        self.heuristics = [build_heuristic(instance.graph, instance.costs, g) for g in instance.goals]
        self.stats: dict = {}
        self._cache: dict = {}

    def __call__(self, agent: int, constraints=()) -> list:
        own = frozenset(c for c in constraints if c.agent == agent)
        key = (agent, own)
        hit = self._cache.get(key)
        if hit is not None:
            self.metrics.n_lowlevel_cached += 1
            return hit
        self.metrics.n_lowlevel += 1
        inst = self.instance
        res = self.planner(
            inst.graph,
            inst.costs,
            inst.starts[agent],
            inst.goals[agent],
            ConstraintTable(own),
            h=self.heuristics[agent],
            horizon=self.horizon,
            stats=self.stats,
        )
        self._cache[key] = res
        return res


def default_horizon(instance: Instance) -> int:
    return max(len(instance.graph.vertices), 2 * (instance.graph.width + instance.graph.height))


class RootEnumerator:
    """Mixed-radix walk over the Cartesian product of per-agent fronts, agent 0 the slowest digit."""

    def __init__(self, fronts: list):
        self.fronts = [sorted(f, key=lambda pc: pc[1]) for f in fronts]
        self.radix = [len(f) for f in self.fronts]

    def __len__(self) -> int:
        return math.prod(self.radix)

    def digits(self, index: int) -> list:
        out = []
        for r in reversed(self.radix):
            index, d = divmod(index, r)
            out.append(d)
        return out[::-1]

    def root(self, index: int, tree: Optional[int] = None) -> HighLevelNode:
        picks = [self.fronts[a][d] for a, d in enumerate(self.digits(index))]
        paths = tuple(p for p, _ in picks)
        pcs = tuple(c for _, c in picks)
        cost = zero(len(pcs[0]))
        for c in pcs:
            cost = add(cost, c)
        return HighLevelNode(cost, paths, pcs, (), index if tree is None else tree)

    def __iter__(self) -> Iterator[HighLevelNode]:
        for i in range(len(self)):
            yield self.root(i)


def individual_fronts(instance: Instance, low_level: LowLevel) -> list:
    fronts = []
    for a in range(instance.n_agents):
        f = low_level(a, ())
        if not f:
            raise Infeasible(f"agent {a} cannot reach its goal within horizon {low_level.horizon}")
        fronts.append(f)
    return fronts


def init_roots(instance: Instance, low_level: LowLevel) -> list:
    return list(RootEnumerator(individual_fronts(instance, low_level)))


def expand(node: HighLevelNode, low_level: LowLevel, front: Optional[SolutionFront] = None,
           conflict: Optional[Conflict] = None, metrics: Optional[Metrics] = None) -> list:
    """Split the node's first conflict and replan the constrained agent on each side."""
    if conflict is None:
        conflict = detect_first_conflict(node.paths)
        if conflict is None:
            raise ValueError("node has no conflict to split")
    children = []
    for omega in split_conflict(conflict):
        cons = node.constraints + (omega,)
        i = omega.agent
        # cost of every agent but i; the child adds i's new path cost back
        rest = tuple(a - b for a, b in zip(node.cost, node.path_costs[i]))
        for path, pc in low_level(i, cons):
            cost = tuple(a + b for a, b in zip(rest, pc))
            if front is not None and front.filter(cost):
                if metrics is not None:
                    metrics.n_filter_child += 1
                continue
            pcs = node.path_costs[:i] + (pc,) + node.path_costs[i + 1 :]
            paths = node.paths[:i] + (path,) + node.paths[i + 1 :]
            children.append(HighLevelNode(cost, paths, pcs, cons, node.tree))
    return children


@dataclass
class SolveResult:
    status: str  # complete | timeout | no_solution
    front: SolutionFront
    metrics: Metrics
    strategy: str = "global"
    low_level: str = "boa"
    horizon: int = 0
    extra: dict = field(default_factory=dict)

    def costs(self) -> list:
        return self.front.costs()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "front": [{"cost": list(c), "paths": [list(p) for p in paths]} for c, (paths, _) in self.front.items()],
            "metrics": self.metrics.to_json(),
        }


def solve(
    instance: Instance,
    strategy: str = "global",
    low_level: str = "boa",
    horizon: Optional[int] = None,
    time_limit: Optional[float] = None,
    dedup: bool = True,
) -> SolveResult:
    """Multi-objective CBS.

    With ``dedup`` a popped node whose tree, constraint set and joint paths
    match an already expanded node is skipped. Its subtree would be an exact
    copy, so the returned front is the same either way; only the counters and
    the running time change.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.perf_counter()
    deadline = math.inf if time_limit is None else t0 + time_limit
    metrics = Metrics()
    ll = LowLevel(instance, low_level, horizon, metrics)
    front = SolutionFront()
    result = SolveResult("complete", front, metrics, strategy, low_level, ll.horizon)

    def finish(status):
        result.status = status
        metrics.n_sol = len(front)
        metrics.ms = (time.perf_counter() - t0) * 1000.0
        result.extra["lowlevel_expansions"] = ll.stats.get("expansions", 0)
        return result

    try:
        roots = RootEnumerator(individual_fronts(instance, ll))
    except Infeasible as e:
        log.info("%s", e)
        return finish("no_solution")

    tie = count()
    open_: list = []
    seen: set = set()
    n_roots = len(roots)
    if strategy == "global":
        for idx, node in enumerate(roots):
            if idx % 1024 == 0 and time.perf_counter() > deadline:
                return finish("timeout")
            open_.append((node.cost, next(tie), node))
            metrics.n_root += 1
        heapq.heapify(open_)
        next_tree = n_roots
    else:
        next_tree = 0

    while True:
        if not open_:
            if next_tree >= n_roots:
                break
            node = roots.root(next_tree)
            next_tree += 1
            metrics.n_root += 1
            heapq.heappush(open_, (node.cost, next(tie), node))
        if time.perf_counter() > deadline:
            return finish("timeout")
        if len(open_) > metrics.peak_open:
            metrics.peak_open = len(open_)
        _, _, node = heapq.heappop(open_)
        if front.filter(node.cost):
            metrics.n_filter_pop += 1
            continue
        if dedup:
            key = (node.tree, frozenset(node.constraints), node.paths)
            if key in seen:
                metrics.n_duplicate += 1
                continue
            seen.add(key)
        conflict = detect_first_conflict(node.paths)
        if conflict is None:
            update_front(front, node)
            continue
        metrics.n_conflict += 1
        for child in expand(node, ll, front, conflict, metrics):
            heapq.heappush(open_, (child.cost, next(tie), child))
    return finish("complete" if len(front) else "no_solution")
