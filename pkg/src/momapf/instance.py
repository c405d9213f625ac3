"""MovingAI map/scenario IO and deterministic edge-cost models.

Random costs are drawn from numpy's Philox (a 64-bit counter-based generator)
seeded with the user seed. Edges consume the stream in a fixed order: vertices
row-major, and per vertex the self-loop, then the east edge, then the south
edge. Each undirected edge gets one vector shared by both directions.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .model import EAST, SELF, SOUTH, OPPOSITE, EdgeCosts, GridGraph

PASSABLE = frozenset(".G")
BLOCKED = frozenset("@TO")


class MapParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


class ScenarioError(ValueError):
    pass


def parse_map(text: str) -> GridGraph:
    lines = text.splitlines()
    # drop trailing blank lines only; everything else is positional
    while lines and not lines[-1].strip():
        lines.pop()
    header = {}
    i = 0
    while i < len(lines):
        parts = lines[i].split()
        if not parts:
            raise MapParseError("blank line in header", i + 1)
        key = parts[0].lower()
        if key == "map":
            i += 1
            break
        if key not in ("type", "height", "width") or len(parts) != 2:
            raise MapParseError(f"unexpected header line {lines[i]!r}", i + 1)
        header[key] = parts[1]
        i += 1
    else:
        raise MapParseError("missing 'map' line")
    for key in ("type", "height", "width"):
        if key not in header:
            raise MapParseError(f"missing '{key}' header")
    if header["type"] != "octile":
        raise MapParseError(f"unsupported map type {header['type']!r}", 1)
    try:
        h, w = int(header["height"]), int(header["width"])
    except ValueError:
        raise MapParseError("height/width must be integers") from None
    if h <= 0 or w <= 0:
        raise MapParseError("height/width must be positive")
    rows = lines[i:]
    if len(rows) != h:
        raise MapParseError(f"expected {h} map rows, found {len(rows)}", i + 1 + min(len(rows), h))
    passable = np.zeros((h, w), dtype=bool)
    for r, row in enumerate(rows):
        row = row.rstrip("\r")
        if len(row) != w:
            raise MapParseError(f"row has {len(row)} cells, expected {w}", i + 1 + r)
        for c, ch in enumerate(row):
            if ch in PASSABLE:
                passable[r, c] = True
            elif ch not in BLOCKED:
                raise MapParseError(f"unknown glyph {ch!r}", i + 1 + r, c + 1)
    return GridGraph(w, h, passable)


def serialize_map(g: GridGraph) -> str:
    rows = ["".join("." if p else "@" for p in row) for row in g.passable]
    return "\n".join(["type octile", f"height {g.height}", f"width {g.width}", "map", *rows]) + "\n"


@dataclass
class Scenario:
    map_name: str
    agents: list = field(default_factory=list)  # [(start, goal)] as cell ids

    def first(self, n: int) -> "Scenario":
        if n > len(self.agents):
            raise ScenarioError(f"scenario has {len(self.agents)} agents, {n} requested")
        return Scenario(self.map_name, self.agents[:n])


def parse_scen(text: str, graph: Optional[GridGraph] = None) -> Scenario:
    lines = text.splitlines()
    if not lines or not lines[0].strip().lower().startswith("version"):
        raise ScenarioError("missing 'version' header")
    if lines[0].split()[1:] not in (["1"], ["1.0"]):
        raise ScenarioError(f"unsupported scenario version: {lines[0]!r}")
    agents = []
    map_name = ""
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 9:
            raise ScenarioError(f"line {lineno}: expected 9 fields, got {len(parts)}")
        try:
            w, h, sx, sy, gx, gy = (int(x) for x in parts[2:8])
        except ValueError:
            raise ScenarioError(f"line {lineno}: non-integer field") from None
        map_name = map_name or parts[1]
        if graph is not None and (w, h) != (graph.width, graph.height):
            raise ScenarioError(f"line {lineno}: map size {w}x{h} does not match graph")
        for x, y in ((sx, sy), (gx, gy)):
            if not (0 <= x < w and 0 <= y < h):
                raise ScenarioError(f"line {lineno}: coordinate ({x},{y}) outside map")
            if graph is not None and not graph.passable[y, x]:
                raise ScenarioError(f"line {lineno}: ({x},{y}) is blocked")
        agents.append((sy * w + sx, gy * w + gx))
    return Scenario(map_name, agents)


def bfs_distances(g: GridGraph, src: int) -> dict:
    dist = {src: 0}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def make_random_scen(g: GridGraph, n_agents: int, seed: int, map_name: str = "map.map") -> str:
    """Random start/goal pairs (distinct starts, distinct goals, goal reachable), MovingAI v1 text."""
    rng = np.random.default_rng(seed)
    verts = g.vertices
    used_s, used_g = set(), set()
    out = ["version 1"]
    tries = 0
    while len(out) - 1 < n_agents:
        tries += 1
        if tries > 10000 * max(n_agents, 1):
            raise ScenarioError("could not place agents")
        s, t = (int(x) for x in rng.choice(verts, size=2, replace=False))
        if s in used_s or t in used_g:
            continue
        dist = bfs_distances(g, s)
        if t not in dist:
            continue
        used_s.add(s)
        used_g.add(t)
        (sx, sy), (gx, gy) = g.coords(s), g.coords(t)
        out.append("\t".join(map(str, [0, map_name, g.width, g.height, sx, sy, gx, gy, float(dist[t])])))
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class CostModelSpec:
    kind: str = "random"  # "random" | "time-risk"
    m: int = 2
    cmax: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind == "random":
            if self.m < 1 or self.cmax < 1:
                raise ValueError("random cost model needs m >= 1 and cmax >= 1")
        elif self.kind == "time-risk":
            if self.m != 2:
                raise ValueError("time-risk cost model has exactly 2 objectives")
        else:
            raise ValueError(f"unknown cost model {self.kind!r}")


def assign_random_costs(g: GridGraph, spec: CostModelSpec) -> EdgeCosts:
    if spec.kind != "random":
        raise ValueError("assign_random_costs needs a random cost model")
    slots = []
    for v in g.vertices:
        for s in (SELF, EAST, SOUTH):
            if g.nbr[v, s] >= 0:
                slots.append((v, s))
    rng = np.random.Generator(np.random.Philox(spec.seed))
    draws = rng.integers(1, spec.cmax, endpoint=True, size=(len(slots), spec.m), dtype=np.int64)
    tab = np.zeros((g.n_cells, 5, spec.m), dtype=np.int64)
    for (v, s), c in zip(slots, draws):
        tab[v, s] = c
        if s != SELF:
            tab[g.nbr[v, s], OPPOSITE[s]] = c
    return EdgeCosts(g, tab)


def risk_map(g: GridGraph) -> np.ndarray:
    """1 + number of blocked cells among the 8 in-bounds neighbours, per cell."""
    blocked = np.pad(~g.passable, 1, constant_values=False).astype(np.int64)
    h, w = g.height, g.width
    count = sum(
        blocked[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
        if (dr, dc) != (0, 0)
    )
    return 1 + count


def assign_time_risk_costs(g: GridGraph) -> EdgeCosts:
    """Every action costs (1, risk of the cell occupied after the action)."""
    risk = risk_map(g).ravel()
    tab = np.zeros((g.n_cells, 5, 2), dtype=np.int64)
    nbr = g.nbr
    valid = nbr >= 0
    tab[..., 0][valid] = 1
    tab[..., 1][valid] = risk[nbr[valid]]
    return EdgeCosts(g, tab)


def build_costs(g: GridGraph, spec: CostModelSpec) -> EdgeCosts:
    if spec.kind == "random":
        return assign_random_costs(g, spec)
    return assign_time_risk_costs(g)


@dataclass
class Instance:
    graph: GridGraph
    costs: EdgeCosts
    starts: list
    goals: list
    map_name: str = ""
    cost_model: Optional[CostModelSpec] = None

    @property
    def n_agents(self) -> int:
        return len(self.starts)

    @property
    def m(self) -> int:
        return self.costs.m

    @classmethod
    def build(cls, graph: GridGraph, scenario: Scenario, spec: CostModelSpec, n_agents: Optional[int] = None):
        if n_agents is not None:
            scenario = scenario.first(n_agents)
        for s, t in scenario.agents:
            if not (graph.is_vertex(s) and graph.is_vertex(t)):
                raise ScenarioError("start/goal on a blocked cell")
        return cls(
            graph,
            build_costs(graph, spec),
            [s for s, _ in scenario.agents],
            [t for _, t in scenario.agents],
            scenario.map_name,
            spec,
        )

    def to_json(self) -> dict:
        return {
            "map": {"name": self.map_name, "text": serialize_map(self.graph)},
            "agents": [[s, t] for s, t in zip(self.starts, self.goals)],
            "cost_model": asdict(self.cost_model) if self.cost_model else None,
            "seed": self.cost_model.seed if self.cost_model else None,
        }

    @classmethod
    def from_json(cls, doc) -> "Instance":
        if isinstance(doc, str):
            doc = json.loads(doc)
        g = parse_map(doc["map"]["text"])
        spec = CostModelSpec(**doc["cost_model"])
        scen = Scenario(doc["map"].get("name", ""), [tuple(a) for a in doc["agents"]])
        return cls.build(g, scen, spec)
