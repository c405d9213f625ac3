"""Grid graphs, cost vectors and path-cost arithmetic."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

CostVector = tuple  # tuple[int, ...]
Path = tuple  # tuple[int, ...] of vertex ids, index = time step

# slot layout of the neighbour table: self-loop, east, south, west, north
SELF, EAST, SOUTH, WEST, NORTH = 0, 1, 2, 3, 4
OPPOSITE = (0, 3, 4, 1, 2)
_OFFSETS = ((0, 0), (1, 0), (0, 1), (-1, 0), (0, -1))


class UsageError(ValueError):
    pass


class MalformedPathError(ValueError):
    pass


def _check_len(a, b):
    if len(a) != len(b):
        raise UsageError(f"cost vectors of different length: {len(a)} vs {len(b)}")


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a`` is componentwise <= ``b`` and strictly smaller somewhere."""
    _check_len(a, b)
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def dominates_or_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_len(a, b)
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def lex_less(a: Sequence[int], b: Sequence[int]) -> bool:
    _check_len(a, b)
    return tuple(a) < tuple(b)


def weakly_dominated_by_any(c, front: Iterable) -> bool:
    """Unchecked helper used in hot loops: some member of ``front`` is <= ``c``."""
    for f in front:
        for x, y in zip(f, c):
            if x > y:
                break
        else:
            return True
    return False


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def zero(m: int) -> CostVector:
    return (0,) * m


def pareto_front(costs: Iterable[Sequence[int]]) -> list:
    """Distinct, mutually non-dominated vectors, lexicographically sorted."""
    out: list = []
    for c in sorted(set(tuple(c) for c in costs)):
        # earlier items in lex order can dominate later ones, never the reverse
        if not weakly_dominated_by_any(c, out):
            out.append(c)
    return out


@dataclass(frozen=True, eq=False)
class GridGraph:
    """4-connected grid; vertex id = row * width + col. Every passable cell has a wait self-loop."""

    width: int
    height: int
    passable: np.ndarray  # (height, width) bool

    def __post_init__(self):
        p = np.asarray(self.passable, dtype=bool)
        if p.shape != (self.height, self.width):
            raise ValueError(f"passable has shape {p.shape}, expected {(self.height, self.width)}")
        object.__setattr__(self, "passable", p)

    @classmethod
    def open(cls, width: int, height: int) -> "GridGraph":
        return cls(width, height, np.ones((height, width), dtype=bool))

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    def cell(self, col: int, row: int) -> int:
        return row * self.width + col

    def coords(self, v: int) -> tuple[int, int]:
        """(col, row) of vertex ``v``."""
        return v % self.width, v // self.width

    def is_vertex(self, v: int) -> bool:
        return 0 <= v < self.n_cells and bool(self.passable.flat[v])

    @cached_property
    def vertices(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.passable.ravel())]

    @cached_property
    def nbr(self) -> np.ndarray:
        """(n_cells, 5) int64 table, slot 0 = self, -1 where no edge."""
        tab = np.full((self.n_cells, 5), -1, dtype=np.int64)
        for v in self.vertices:
            c, r = self.coords(v)
            for s, (dc, dr) in enumerate(_OFFSETS):
                cc, rr = c + dc, r + dr
                if 0 <= cc < self.width and 0 <= rr < self.height and self.passable[rr, cc]:
                    tab[v, s] = rr * self.width + cc
        return tab

    def neighbors(self, v: int) -> list[int]:
        """Move targets of ``v``, excluding the self-loop."""
        return [int(w) for w in self.nbr[v, 1:] if w >= 0]

    def adjacent(self, u: int, w: int) -> bool:
        return self.is_vertex(u) and (u == w or w in self.neighbors(u))

    def move_edges(self) -> list[tuple[int, int]]:
        """Undirected move edges (u < w), row-major order, east edge before south edge."""
        out = []
        for v in self.vertices:
            for s in (EAST, SOUTH):
                w = int(self.nbr[v, s])
                if w >= 0:
                    out.append((v, w))
        return out


class EdgeCosts:
    """Directed cost table aligned with ``graph.nbr``: ``table[u, slot]`` is the cost of u -> nbr[u, slot]."""

    def __init__(self, graph: GridGraph, table: np.ndarray):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 3 or table.shape[:2] != (graph.n_cells, 5):
            raise ValueError(f"cost table has shape {table.shape}")
        if (table < 0).any():
            raise ValueError("negative edge cost")
        self.graph = graph
        self.table = table
        self.table.setflags(write=False)

    @property
    def m(self) -> int:
        return self.table.shape[2]

    @classmethod
    def uniform(cls, graph: GridGraph, move, wait=None) -> "EdgeCosts":
        move = tuple(move)
        wait = move if wait is None else tuple(wait)
        tab = np.zeros((graph.n_cells, 5, len(move)), dtype=np.int64)
        tab[:, 1:, :] = move
        tab[:, 0, :] = wait
        return cls(graph, tab)

    @cached_property
    def succ(self) -> list[list[tuple[int, CostVector]]]:
        """Per vertex: [(w, cost)] with the self-loop first."""
        nbr = self.graph.nbr
        out: list = [[] for _ in range(self.graph.n_cells)]
        for v in self.graph.vertices:
            for s in range(5):
                w = int(nbr[v, s])
                if w >= 0:
                    out[v].append((w, tuple(int(x) for x in self.table[v, s])))
        return out

    @cached_property
    def _lookup(self) -> dict:
        return {(v, w): c for v, lst in enumerate(self.succ) for w, c in lst}

    def cost(self, u: int, w: int) -> CostVector:
        try:
            return self._lookup[(u, w)]
        except KeyError:
            raise MalformedPathError(f"no edge {u} -> {w}") from None

    def wait_cost(self, v: int) -> CostVector:
        return self.cost(v, v)

    def with_waits(self, wait) -> "EdgeCosts":
        """Copy with every self-loop cost replaced by ``wait``."""
        tab = self.table.copy()
        tab[:, 0, :] = tuple(wait)
        return EdgeCosts(self.graph, tab)

    def prepend_time(self) -> "EdgeCosts":
        """Copy with a new component 0 equal to 1 for every action (move or wait)."""
        ones = np.ones(self.table.shape[:2] + (1,), dtype=np.int64)
        return EdgeCosts(self.graph, np.concatenate([ones, self.table], axis=2))

    def is_symmetric(self) -> bool:
        for u, w in self.graph.move_edges():
            if self.cost(u, w) != self.cost(w, u):
                return False
        return True


def path_cost(path: Sequence[int], costs: EdgeCosts) -> CostVector:
    """Sum of edge costs along ``path`` (waits included)."""
    if len(path) == 0:
        raise MalformedPathError("empty path")
    g = [0] * costs.m
    for u, w in zip(path, path[1:]):
        c = costs.cost(int(u), int(w))
        for k in range(costs.m):
            g[k] += c[k]
    return tuple(g)


def joint_cost(paths: Sequence[Sequence[int]], costs: EdgeCosts) -> CostVector:
    g = zero(costs.m)
    for p in paths:
        g = add(g, path_cost(p, costs))
    return g


def position(path: Sequence[int], t: int) -> int:
    """Vertex at time ``t`` with goal-stay padding."""
    return path[t] if t < len(path) else path[-1]
