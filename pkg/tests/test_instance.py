import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from momapf.instance import (
    CostModelSpec,
    Instance,
    MapParseError,
    ScenarioError,
    assign_random_costs,
    assign_time_risk_costs,
    make_random_scen,
    parse_map,
    parse_scen,
    risk_map,
    serialize_map,
)
from momapf.model import GridGraph, path_cost

from helpers import grid


def mapfile(*rows):
    return "type octile\nheight {}\nwidth {}\nmap\n{}\n".format(len(rows), len(rows[0]), "\n".join(rows))


def test_single_cell_map():
    g = parse_map(mapfile("."))
    assert g.vertices == [0]
    assert g.nbr[0, 0] == 0
    assert g.move_edges() == []


def test_two_cell_map():
    g = parse_map(mapfile(".."))
    assert len(g.vertices) == 2
    assert g.move_edges() == [(0, 1)]
    assert all(g.nbr[v, 0] == v for v in g.vertices)


def test_two_by_two_with_one_blocked_cell():
    g = parse_map(mapfile(".@", ".."))
    assert len(g.vertices) == 3
    assert len(g.move_edges()) == 2


def test_glyphs():
    g = parse_map(mapfile(".G@", "TO."))
    assert g.passable.tolist() == [[True, True, False], [False, False, True]]


@pytest.mark.parametrize(
    "text,where",
    [
        (mapfile("..", "."), (6, None)),
        (mapfile("..", ".x"), (6, 2)),
        ("type octile\nheight 1\nwidth 2\nmap\n", (5, None)),
        ("type grid\nheight 1\nwidth 1\nmap\n.\n", (1, None)),
    ],
)
def test_parse_errors_carry_position(text, where):
    with pytest.raises(MapParseError) as exc:
        parse_map(text)
    assert (exc.value.line, exc.value.col) == where


def test_missing_header_is_an_error():
    with pytest.raises(MapParseError):
        parse_map("height 1\nwidth 1\nmap\n.\n")


@given(st.integers(1, 7), st.integers(1, 7), st.data())
def test_map_round_trip(w, h, data):
    cells = data.draw(st.lists(st.booleans(), min_size=w * h, max_size=w * h))
    g = GridGraph(w, h, np.array(cells, dtype=bool).reshape(h, w))
    g2 = parse_map(serialize_map(g))
    assert (g2.width, g2.height) == (w, h)
    assert (g2.passable == g.passable).all()


SCEN_HEADER = "version 1\n"


def test_empty_scenario():
    assert parse_scen(SCEN_HEADER).agents == []


def test_one_agent_scenario():
    g = parse_map(mapfile(".."))
    s = parse_scen(SCEN_HEADER + "0\tm.map\t2\t1\t0\t0\t1\t0\t1\n", g)
    assert s.agents == [(0, 1)]
    assert s.map_name == "m.map"


@pytest.mark.parametrize(
    "line",
    [
        "0\tm.map\t2\t1\t0\t0\t2\t0\t1",  # goal out of range
        "0\tm.map\t2\t1\t0\t0\t1",  # too few fields
        "0\tm.map\t2\t1\ta\t0\t1\t0\t1",  # non-integer
    ],
)
def test_bad_scenario_lines(line):
    g = parse_map(mapfile(".."))
    with pytest.raises(ScenarioError):
        parse_scen(SCEN_HEADER + line + "\n", g)


def test_blocked_start_rejected():
    g = parse_map(mapfile(".@"))
    with pytest.raises(ScenarioError):
        parse_scen(SCEN_HEADER + "0\tm.map\t2\t1\t1\t0\t0\t0\t1\n", g)


def test_scenario_needs_version_header():
    with pytest.raises(ScenarioError):
        parse_scen("0\tm.map\t2\t1\t0\t0\t1\t0\t1\n")


def test_first_n_agents_match_independent_line_parser():
    g = grid(8)
    text = make_random_scen(g, 10, seed=4)
    expected = []
    for line in text.strip().split("\n")[1:]:
        f = line.split("\t")
        sx, sy, gx, gy = map(int, f[4:8])
        expected.append((sy * 8 + sx, gy * 8 + gx))
    scen = parse_scen(text, g)
    assert scen.agents == expected
    assert scen.first(6).agents == expected[:6]
    with pytest.raises(ScenarioError):
        scen.first(11)


def test_random_costs_cmax_one_is_all_ones():
    g = grid(4)
    c = assign_random_costs(g, CostModelSpec("random", 3, 1, 7))
    for v in g.vertices:
        for w, cost in c.succ[v]:
            assert cost == (1, 1, 1)


def test_random_costs_are_deterministic_and_seed_sensitive():
    g = grid(4)
    a = assign_random_costs(g, CostModelSpec("random", 2, 5, 11)).table
    b = assign_random_costs(g, CostModelSpec("random", 2, 5, 11)).table
    c = assign_random_costs(g, CostModelSpec("random", 2, 5, 12)).table
    assert a.tobytes() == b.tobytes()
    assert (a != c).any()


def test_random_costs_in_range_and_symmetric():
    g = grid(5, blocked=[(2, 2)])
    c = assign_random_costs(g, CostModelSpec("random", 3, 4, 0))
    assert c.is_symmetric()
    for v in g.vertices:
        for _, cost in c.succ[v]:
            assert all(1 <= x <= 4 for x in cost)


def test_random_cost_stream_order_is_pinned():
    g = grid(2)
    c = assign_random_costs(g, CostModelSpec("random", 1, 1000, 5))
    rng = np.random.Generator(np.random.Philox(5))
    # row-major vertices; per vertex self-loop, east, south
    order = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 3), (2, 2), (2, 3), (3, 3)]
    draws = rng.integers(1, 1000, endpoint=True, size=(len(order), 1))
    for (u, w), d in zip(order, draws):
        assert c.cost(u, w) == (int(d[0]),)


def test_cost_model_spec_validation():
    with pytest.raises(ValueError):
        CostModelSpec("random", 0, 2, 0)
    with pytest.raises(ValueError):
        CostModelSpec("random", 2, 0, 0)
    with pytest.raises(ValueError):
        CostModelSpec("time-risk", 3, 1, 0)
    with pytest.raises(ValueError):
        CostModelSpec("other", 2, 1, 0)


def test_risk_values():
    g = parse_map(mapfile("....", ".@@.", "..@.", "...."))
    risk = risk_map(g)
    assert risk[0, 0] == 2  # corner touching one blocked cell
    assert risk[3, 3] == 2
    assert risk[2, 1] == 4  # three blocked neighbours
    assert risk_map(grid(3))[0, 0] == 1  # corner of an all-free map
    open_g = grid(5)
    costs = assign_time_risk_costs(open_g)
    assert costs.cost(open_g.cell(2, 2), open_g.cell(2, 1)) == (1, 1)


def test_time_risk_charges_arrival_cell():
    g = parse_map(mapfile("...", ".@.", "..."))
    costs = assign_time_risk_costs(g)
    risk = risk_map(g).ravel()
    for v in g.vertices:
        for w, c in costs.succ[v]:
            assert c == (1, int(risk[w]))
    p = [0, 1, 2, 5, 8]
    assert path_cost(p, costs)[0] == len(p) - 1


def test_instance_json_round_trip():
    g = grid(4, blocked=[(1, 1)])
    scen = parse_scen(make_random_scen(g, 3, 2), g)
    inst = Instance.build(g, scen, CostModelSpec("random", 2, 3, 9))
    doc = json.loads(json.dumps(inst.to_json()))
    back = Instance.from_json(doc)
    assert back.starts == inst.starts and back.goals == inst.goals
    assert back.costs.table.tobytes() == inst.costs.table.tobytes()


def test_make_random_scen_is_deterministic():
    g = grid(6)
    assert make_random_scen(g, 5, 1) == make_random_scen(g, 5, 1)
    scen = parse_scen(make_random_scen(g, 5, 1), g)
    assert len({s for s, _ in scen.agents}) == 5
    assert len({t for _, t in scen.agents}) == 5
