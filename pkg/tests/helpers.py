"""Shared instance generators for the test suite."""
from __future__ import annotations

import itertools

import numpy as np

from momapf.instance import CostModelSpec, Instance, make_random_scen, parse_scen
from momapf.lowlevel import Constraint
from momapf.model import EdgeCosts, GridGraph
from momapf.mosipp import ObstacleTrajectory

CRIT1_HORIZON = 16


def grid(w, h=None, blocked=()):
    h = w if h is None else h
    p = np.ones((h, w), dtype=bool)
    for col, row in blocked:
        p[row, col] = False
    return GridGraph(w, h, p)


def obstacle_grid(w):
    """Open grid with two interior blocked cells."""
    return grid(w, w, [(1, 1), (w - 2, 2)])


def multi_agent_instance(seed, w=4, n=2, m=2, cmax=2, obstacles=False):
    g = obstacle_grid(w) if obstacles else grid(w)
    scen = parse_scen(make_random_scen(g, n, seed), g)
    return Instance.build(g, scen, CostModelSpec("random", m, cmax, seed))


def crit1_cases():
    """64 small instances: {4x4, 5x5} x {open, obstacles} x N in {2, 3} x C_max in {2, 5}, four seeds each."""
    cases = []
    for k, (w, obs, n, cmax) in enumerate(itertools.product((4, 5), (False, True), (2, 3), (2, 5))):
        for rep in range(4):
            seed = 1000 + 10 * k + rep
            cases.append(dict(seed=seed, w=w, obstacles=obs, n=n, cmax=cmax))
    return cases


def case_name(c):
    return f"{c['w']}x{c['w']}{'o' if c['obstacles'] else ''}-N{c['n']}-C{c['cmax']}-s{c['seed']}"


def random_costs(g, m, cmax, rng):
    table = np.zeros((g.n_cells, 5, m), dtype=np.int64)
    for v in g.vertices:
        table[v, 0] = rng.integers(1, cmax, endpoint=True, size=m)
    for u, w in g.move_edges():
        c = rng.integers(1, cmax, endpoint=True, size=m)
        for a, b in ((u, w), (w, u)):
            slot = list(g.nbr[a]).index(b)
            table[a, slot] = c
    return EdgeCosts(g, table)


def random_constraints(rng, g, k, max_t=8, agent=0):
    out = []
    verts = g.vertices
    for _ in range(k):
        t = int(rng.integers(0, max_t))
        u = int(rng.choice(verts))
        if rng.random() < 0.5:
            out.append(Constraint(agent, u, u, t + 1))
        else:
            nb = g.neighbors(u)
            if nb:
                out.append(Constraint(agent, u, int(rng.choice(nb)), t))
    return out


def random_obstacles(rng, g, start, k):
    """``k`` random-walk obstacles that keep clear of ``start`` at time 0."""
    out = []
    verts = [v for v in g.vertices if v != start]
    for _ in range(k):
        v = int(rng.choice(verts))
        t0 = int(rng.integers(0, 4))
        path = [v]
        for _ in range(int(rng.integers(0, 5))):
            path.append(int(rng.choice([path[-1]] + g.neighbors(path[-1]))))
        if t0 == 0 and path[0] == start:
            continue
        out.append(ObstacleTrajectory(t0, path, bool(rng.random() < 0.3)))
    return out


def benign_costs(g, m, cmax, rng):
    """Random costs on which MO-SIPP is exact: waits are free, or objective 0 is unit time."""
    if m > 1 and rng.random() < 0.5:
        base = random_costs(g, m - 1, cmax, rng)
        return base.with_waits((0,) * (m - 1)).prepend_time()
    return random_costs(g, m, cmax, rng).with_waits((0,) * m)


def fig1():
    """2x3 open grid a b c / d e f; one obstacle at b at t=2 then e from t=3 on."""
    g = grid(3, 2)
    return g, [ObstacleTrajectory(2, [1, 4], stays=True)]


A, B, C, D, E, F = range(6)


def floyd_warshall(g, costs, m):
    n = g.n_cells
    INF = float("inf")
    d = [[INF] * n for _ in range(n)]
    for v in g.vertices:
        d[v][v] = 0
        for w in g.neighbors(v):
            d[v][w] = costs.cost(v, w)[m]
    for k in g.vertices:
        for i in g.vertices:
            dik = d[i][k]
            if dik == INF:
                continue
            for j in g.vertices:
                if dik + d[k][j] < d[i][j]:
                    d[i][j] = dik + d[k][j]
    return d
