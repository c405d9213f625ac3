import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momapf.lowlevel import (
    Constraint,
    ConstraintTable,
    boa_st,
    build_heuristic,
    consistent,
    namoa_dr_st,
    path_consistent,
)
from momapf.model import EdgeCosts, UsageError, dominates_or_equal, path_cost, pareto_front
from momapf.oracle import costs_of, single_agent_front_bruteforce

from helpers import floyd_warshall, grid, random_constraints, random_costs


def fronts(res):
    return [c for _, c in res]


def random_problem(seed, m, cmax=3, k_max=3):
    rng = np.random.default_rng(seed)
    g = grid(4, blocked=[(1, 2)] if seed % 2 else [])
    costs = random_costs(g, m, cmax, rng)
    start, goal = (int(x) for x in rng.choice(g.vertices, size=2, replace=False))
    cons = random_constraints(rng, g, int(rng.integers(0, k_max + 1)))
    return g, costs, start, goal, cons


def test_heuristic_examples():
    g = grid(3, 1)
    h = build_heuristic(g, EdgeCosts.uniform(g, (1, 1)), goal=2)
    assert h[2] == (0, 0)
    assert h[0] == (2, 2)
    with pytest.raises(UsageError):
        build_heuristic(grid(2, blocked=[(0, 0)]), EdgeCosts.uniform(grid(2), (1,)), goal=0)


@given(st.integers(0, 10_000))
@settings(max_examples=25)
def test_heuristic_matches_floyd_warshall(seed):
    rng = np.random.default_rng(seed)
    g = grid(4, blocked=[(2, 1)])
    costs = random_costs(g, 2, 9, rng)
    goal = int(rng.choice(g.vertices))
    h = build_heuristic(g, costs, goal)
    for m in range(2):
        d = floyd_warshall(g, costs, m)
        for v in g.vertices:
            assert h[v][m] == d[v][goal]
        assert not h.reachable[g.cell(2, 1)]


def test_heuristic_is_consistent():
    rng = np.random.default_rng(5)
    g = grid(5, blocked=[(2, 2), (1, 3)])
    costs = random_costs(g, 3, 7, rng)
    h = build_heuristic(g, costs, g.cell(4, 4))
    for u in g.vertices:
        for w in g.neighbors(u):
            assert dominates_or_equal(h[u], tuple(a + b for a, b in zip(costs.cost(u, w), h[w])))


def test_consistent_examples():
    assert consistent(3, 7, 4, [])
    vc = [Constraint(0, 5, 5, 4)]
    assert not consistent(4, 3, 5, vc)
    assert consistent(4, 2, 5, vc)
    ec = [Constraint(0, 1, 2, 3)]
    assert not consistent(1, 3, 2, ec)
    assert consistent(2, 3, 1, ec)
    assert consistent(1, 4, 2, ec)
    assert consistent(1, 3, 1, ec)  # waiting is never an edge violation


def test_path_consistent_checks_start_and_goal_hold():
    assert not path_consistent((0, 1), [Constraint(0, 0, 0, 0)])
    assert not path_consistent((0, 1), [Constraint(0, 1, 1, 5)])
    assert path_consistent((0, 1, 1, 1, 1, 1), [Constraint(0, 1, 1, 4)]) is False
    assert path_consistent((0, 0, 0, 0, 0, 1), [Constraint(0, 1, 1, 4)])


def test_m1_no_constraints_is_shortest_path():
    g = grid(4)
    costs = EdgeCosts.uniform(g, (1,))
    res = namoa_dr_st(g, costs, 0, 15)
    assert fronts(res) == [(6,)]
    assert len(res[0][0]) == 7


def test_vertex_constraint_costs_at_most_one_extra_step():
    g = grid(5, 3)
    costs = EdgeCosts.uniform(g, (1,))
    s, t = g.cell(0, 1), g.cell(4, 1)
    base = fronts(namoa_dr_st(g, costs, s, t, horizon=12))
    cons = [Constraint(0, g.cell(2, 1), g.cell(2, 1), 2)]
    got = fronts(namoa_dr_st(g, costs, s, t, cons, horizon=12))
    ref = costs_of(single_agent_front_bruteforce(g, costs, s, t, 12, cons))
    assert set(got) == ref
    assert got[0][0] - base[0][0] in (0, 1)


def test_single_pareto_path_when_all_costs_equal():
    g = grid(4)
    costs = EdgeCosts.uniform(g, (1, 1))
    assert len(boa_st(g, costs, 0, 15)) == 1
    assert len(namoa_dr_st(g, costs, 0, 15)) == 1


def corridor_costs():
    """3x3 ring around a blocked centre; the top corridor costs (2,10) and the bottom one (10,2)."""
    g = grid(3, blocked=[(1, 1)])
    tab = np.zeros((g.n_cells, 5, 2), dtype=np.int64)
    tab[:, 0] = (5, 5)

    def put(u, w, c):
        for a, b in ((u, w), (w, u)):
            tab[a, list(g.nbr[a]).index(b)] = c

    c = g.cell
    top = [(c(0, 1), c(0, 0)), (c(0, 0), c(1, 0)), (c(1, 0), c(2, 0)), (c(2, 0), c(2, 1))]
    bottom = [(c(0, 1), c(0, 2)), (c(0, 2), c(1, 2)), (c(1, 2), c(2, 2)), (c(2, 2), c(2, 1))]
    for (u, w), cost in zip(top, [(1, 3), (0, 3), (1, 2), (0, 2)]):
        put(u, w, cost)
    for (u, w), cost in zip(bottom, [(3, 1), (2, 0), (3, 0), (2, 1)]):
        put(u, w, cost)
    return g, EdgeCosts(g, tab), c(0, 1), c(2, 1)


def test_two_corridors():
    g, costs, s, t = corridor_costs()
    for planner in (boa_st, namoa_dr_st):
        res = planner(g, costs, s, t)
        assert fronts(res) == [(2, 10), (10, 2)]
        assert [len(p) for p, _ in res] == [5, 5]


def test_boa_needs_two_objectives():
    g = grid(2)
    with pytest.raises(UsageError):
        boa_st(g, EdgeCosts.uniform(g, (1, 1, 1)), 0, 3)


def test_constrained_start_has_no_path():
    g = grid(3)
    costs = EdgeCosts.uniform(g, (1, 1))
    assert boa_st(g, costs, 0, 8, [Constraint(0, 0, 0, 0)]) == []
    assert namoa_dr_st(g, costs, 0, 8, [Constraint(0, 0, 0, 0)]) == []


def test_goal_hold_waits_out_late_goal_constraints():
    g = grid(3, 1)
    costs = EdgeCosts.uniform(g, (1, 1))
    cons = [Constraint(0, 2, 2, 5)]
    for planner in (boa_st, namoa_dr_st):
        (path, cost), = planner(g, costs, 0, 2, cons)
        assert len(path) - 1 >= 6
        assert path_consistent(path, cons)


def check_result(g, costs, start, goal, cons, res, horizon):
    h = build_heuristic(g, costs, goal)
    cs = fronts(res)
    assert cs == pareto_front(cs)
    last_goal = max((c.t for c in cons if c.is_vertex and c.ua == goal), default=-1)
    for path, cost in res:
        assert path[0] == start and path[-1] == goal
        assert len(path) - 1 <= horizon
        assert path_cost(path, costs) == cost
        assert path_consistent(path, cons)
        assert len(path) - 1 >= last_goal + 1
        for k, v in enumerate(path):
            assert dominates_or_equal(h[v], path_cost(path[k:], costs))


@given(st.integers(0, 100_000))
@settings(max_examples=40)
def test_namoa_front_matches_oracle_m3(seed):
    g, costs, s, t, cons = random_problem(seed, m=3)
    res = namoa_dr_st(g, costs, s, t, cons, horizon=10)
    check_result(g, costs, s, t, cons, res, 10)
    assert set(fronts(res)) == costs_of(single_agent_front_bruteforce(g, costs, s, t, 10, cons))


@given(st.integers(0, 100_000))
@settings(max_examples=40)
def test_boa_and_namoa_agree_with_oracle_m2(seed):
    g, costs, s, t, cons = random_problem(seed, m=2, cmax=4)
    a = boa_st(g, costs, s, t, cons, horizon=10)
    b = namoa_dr_st(g, costs, s, t, cons, horizon=10)
    check_result(g, costs, s, t, cons, a, 10)
    assert fronts(a) == fronts(b)
    assert set(fronts(a)) == costs_of(single_agent_front_bruteforce(g, costs, s, t, 10, cons))


def test_closed_sets_are_antichains():
    for seed in range(20):
        g, costs, s, t, cons = random_problem(seed, m=3)
        stats = {}
        namoa_dr_st(g, costs, s, t, cons, horizon=10, stats=stats)
        for labels in stats["closed"].values():
            assert len(set(labels)) == len(labels)
            assert pareto_front(labels) == sorted(labels)


def test_constraint_table_lookups():
    tab = ConstraintTable([Constraint(0, 3, 3, 2), Constraint(0, 3, 3, 6), Constraint(0, 1, 2, 4)])
    assert not tab.allows(2, 3, 1)
    assert not tab.allows(1, 2, 4)
    assert tab.allows(2, 1, 4)
    assert not tab.can_stay_from(3, 5)
    assert tab.can_stay_from(3, 6)
