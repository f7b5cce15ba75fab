"""Grid primitives: distance, movement reach, adjacency."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_params, make_topology
from dtnplan.grid import (
    CapabilityParams,
    GridSpec,
    Position,
    Topology,
    adjacency,
    distance,
    feasible_moves,
)

coords = st.integers(min_value=0, max_value=19)
points = st.builds(Position, x=coords, y=coords)


def test_distance_identity():
    assert distance(Position(0, 0), Position(0, 0)) == 0.0


def test_distance_345_triangle():
    assert distance(Position(0, 0), Position(3, 4)) == 5.0


def test_distance_diagonal():
    assert distance(Position(1, 1), Position(2, 2)) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_distance_alternate_metrics():
    a, b = Position(1, 1), Position(4, 3)
    assert distance(a, b, "chebyshev") == 3.0
    assert distance(a, b, "manhattan") == 5.0
    with pytest.raises(ValueError):
        distance(a, b, "hamming")


@given(points, points)
def test_distance_symmetric_nonnegative(a, b):
    assert distance(a, b) >= 0.0
    assert distance(a, b) == distance(b, a)
    assert (distance(a, b) == 0.0) == (a == b)


@given(points, points, points)
def test_distance_triangle_inequality(a, b, c):
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9


def test_feasible_moves_corner_unit_reach():
    grid = GridSpec(width=20, height=20)
    moves = feasible_moves(Position(0, 0), make_params(m_max=1.0), grid)
    # (1,1) is excluded: sqrt(2) > 1.
    assert set(moves) == {Position(0, 0), Position(0, 1), Position(1, 0)}


def test_feasible_moves_half_step_stays():
    grid = GridSpec(width=20, height=20)
    moves = feasible_moves(Position(10, 10), make_params(m_max=0.5), grid)
    assert moves == [Position(10, 10)]


def test_feasible_moves_interior_disk_count():
    # Integer points in a closed disk of radius 4: 49.
    grid = GridSpec(width=20, height=20)
    moves = feasible_moves(Position(10, 10), make_params(m_max=4.0), grid)
    assert len(moves) == 49


def test_feasible_moves_contains_origin_and_respects_reach():
    grid = GridSpec(width=9, height=7)
    params = make_params(m_max=3.0)
    for x in range(grid.width):
        for y in range(grid.height):
            p = Position(x, y)
            moves = feasible_moves(p, params, grid)
            assert p in moves
            for q in moves:
                assert distance(p, q) <= params.m_max
                assert grid.in_bounds(q)


def test_feasible_moves_skip_obstacles():
    grid = GridSpec(width=8, height=8, obstacles=frozenset({Position(1, 0), Position(0, 1)}))
    moves = feasible_moves(Position(0, 0), make_params(m_max=1.5), grid)
    assert Position(1, 0) not in moves
    assert Position(0, 1) not in moves
    assert Position(1, 1) in moves


def test_navigable_excludes_obstacles_and_out_of_bounds():
    grid = GridSpec(width=4, height=4, obstacles=frozenset({Position(2, 2)}))
    assert grid.navigable(Position(1, 1))
    assert not grid.navigable(Position(2, 2))
    assert grid.in_bounds(Position(2, 2))
    assert not grid.in_bounds(Position(4, 0))
    assert not grid.navigable(Position(-1, 0))


def test_adjacency_boundary_inclusive():
    topo = make_topology({"a": (0, 0), "b": (5, 0)})
    adj = adjacency(topo, make_params(c_max=5.0))
    assert adj[0][1] and adj[1][0]


def test_adjacency_beyond_range():
    topo = make_topology({"a": (0, 0), "b": (5, 1)})
    adj = adjacency(topo, make_params(c_max=5.0))
    assert not adj[0][1]


def test_adjacency_single_node():
    topo = make_topology({"a": (3, 3)})
    assert adjacency(topo, make_params()) == [[False]]


def test_adjacency_colocated_distinct_nodes_link():
    topo = make_topology({"a": (2, 2), "b": (2, 2)})
    adj = adjacency(topo, make_params())
    assert adj[0][1]


def test_adjacency_symmetric_false_diagonal():
    rng = random.Random(7)
    params = make_params(c_max=4.0)
    for _ in range(25):
        names = [f"n{i}" for i in range(rng.randint(2, 6))]
        topo = make_topology({n: (rng.randint(0, 9), rng.randint(0, 9)) for n in names})
        adj = adjacency(topo, params)
        for i in range(len(names)):
            assert not adj[i][i]
            for j in range(len(names)):
                assert adj[i][j] == adj[j][i]


def test_topology_requires_all_positions():
    with pytest.raises(ValueError):
        Topology(node_ids=("a", "b"), positions={"a": Position(0, 0)})


def test_topology_moved_returns_new_value():
    topo = make_topology({"a": (0, 0), "b": (1, 1)})
    moved = topo.moved("a", Position(2, 2))
    assert topo.positions["a"] == Position(0, 0)
    assert moved.positions["a"] == Position(2, 2)
    assert moved.positions["b"] == Position(1, 1)


def test_topology_pairs_order():
    topo = make_topology({"b": (0, 0), "a": (1, 1), "c": (2, 2)})
    assert topo.pairs() == [("b", "a"), ("b", "c"), ("a", "c")]


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(width=1, height=5)
    with pytest.raises(ValueError):
        GridSpec(width=5, height=5, step_meters=0)
    with pytest.raises(ValueError):
        GridSpec(width=5, height=5, metric="spherical")


def test_capability_params_validation():
    with pytest.raises(ValueError):
        CapabilityParams(s_max=2, s_suf=2, c_max=5, m_max=4)
    with pytest.raises(ValueError):
        CapabilityParams(s_max=4, s_suf=2, c_max=0, m_max=4)
    with pytest.raises(ValueError):
        CapabilityParams(s_max=4, s_suf=2, c_max=5, m_max=4, tau=-1)
    with pytest.raises(ValueError):
        CapabilityParams(s_max=4, s_suf=2, c_max=5, m_max=4, clearing_radius=0)
