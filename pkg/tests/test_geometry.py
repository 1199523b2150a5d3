from itertools import product

import pytest
from hypothesis import given, strategies as st

from tdfpp.errors import ConfigurationError
from tdfpp.geometry import Edge, Path, as_vertex, l1_ball, l1_distance, neighbors

coords = st.integers(-50, 50)
vec3 = st.tuples(coords, coords, coords)


@pytest.mark.parametrize("a, b, expected", [
    ((0, 0), (0, 0), 0),
    ((0, 0), (3, -2), 5),
    ((1, 1, 1), (0, 0, 0), 3),
])
def test_l1_distance(a, b, expected):
    assert l1_distance(a, b) == expected


def test_l1_distance_dimension_mismatch():
    with pytest.raises(ConfigurationError):
        l1_distance((0, 0), (0, 0, 0))


@given(vec3, vec3, vec3)
def test_triangle_inequality(a, b, c):
    assert l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c)


def test_neighbors_order_2d():
    assert [v for _, v in neighbors((0, 0))] == [(-1, 0), (1, 0), (0, -1), (0, 1)]


def test_neighbors_1d_and_3d():
    assert [v for _, v in neighbors((5,))] == [(4,), (6,)]
    assert len(neighbors((0, 0, 0))) == 6


@given(vec3)
def test_neighbors_incident_and_distinct(v):
    nbrs = neighbors(v)
    edges = [e for e, _ in nbrs]
    assert len(set(edges)) == len(edges) == 6
    for e, w in nbrs:
        assert v in e.endpoints() and w in e.endpoints()
        assert l1_distance(v, w) == 1


def _ball_oracle(center, r):
    d = len(center)
    return {tuple(c + o for c, o in zip(center, off))
            for off in product(range(-r, r + 1), repeat=d) if sum(map(abs, off)) <= r}


@pytest.mark.parametrize("r, size", [(0, 1), (1, 5), (2, 13)])
def test_l1_ball_2d_sizes(r, size):
    ball = l1_ball((0, 0), r)
    assert len(ball) == size
    assert ball == _ball_oracle((0, 0), r)


@pytest.mark.parametrize("center, r", [((3, -1, 2), 3), ((7,), 4), ((0, 0, 0, 0), 2)])
def test_l1_ball_matches_enumeration(center, r):
    assert l1_ball(center, r) == _ball_oracle(center, r)


def test_edge_identity_is_orientation_free():
    assert Edge.between((1, 2), (1, 3)) == Edge.between((1, 3), (1, 2)) == Edge((1, 2), 1)
    with pytest.raises(ConfigurationError):
        Edge.between((0, 0), (1, 1))


def test_edge_json_round_trip():
    e = Edge((-2, 5), 0)
    assert e.to_json() == {"base": [-2, 5], "axis": 0}
    assert Edge.from_json(e.to_json()) == e


def test_path_validation():
    p = Path.from_vertices([(0, 0), (1, 0), (1, 1)])
    assert len(p) == 2 and p.end == (1, 1)
    with pytest.raises(ConfigurationError):
        Path((0, 0), ((Edge((5, 5), 0), (6, 5)),))


def test_vertex_overflow_is_configuration_error():
    with pytest.raises(ConfigurationError):
        as_vertex((2**63, 0))
    with pytest.raises(ConfigurationError):
        as_vertex((0.5, 1))
