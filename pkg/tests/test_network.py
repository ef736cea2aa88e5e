from fractions import Fraction

import pytest

from dendrite.addressing import canonicalize, in_cell
from dendrite.metric import Metric
from dendrite.network import (
    CapacityError,
    ball,
    ball_cell_words,
    ball_graph,
    build_level_graph,
    resistance_distance,
    schur_trace,
)

HALF = Fraction(1, 2)
Q0, Q1, Q2, Q3 = ("2", 1), ("", 1), ("", 2), ("", 3)


def test_level_zero_graph():
    g = build_level_graph(0)
    assert len(g.vertices) == 3 and len(g.edges) == 2
    assert all(c == 1 for _, _, c in g.edges)


def test_level_one_graph_counts_and_conductance():
    g = build_level_graph(1, HALF)
    assert len(g.vertices) == 9 and len(g.edges) == 8
    assert all(c == 2 for _, _, c in g.edges)


def test_vertex_count_formula():
    for level in range(5):
        g = build_level_graph(level)
        assert len(g.vertices) == 2 * 4**level + 1
        assert len(g.edges) == len(g.vertices) - 1


def test_capacity_error():
    with pytest.raises(CapacityError):
        build_level_graph(9, max_level=8)


def test_renormalization_edge_for_edge():
    for s0 in (HALF, Fraction(1, 3), Fraction(2, 5)):
        for level in range(3):
            fine = build_level_graph(level + 1, s0)
            coarse = build_level_graph(level, s0)
            red = schur_trace(fine, coarse.vertices)
            got = {(a, b): c for a, b, c in red.edge_list()}
            want = {(coarse.vertices[i], coarse.vertices[j]): c for i, j, c in coarse.edges}
            assert got == want


def test_schur_keep_everything_is_identity():
    g = build_level_graph(1)
    red = schur_trace(g, g.vertices)
    got = {(a, b): c for a, b, c in red.edge_list()}
    want = {(g.vertices[i], g.vertices[j]): c for i, j, c in g.edges}
    assert got == want


def test_schur_requires_two_vertices():
    g = build_level_graph(1)
    with pytest.raises(ValueError):
        schur_trace(g, [Q1])


def test_resistance_distance_examples():
    g = build_level_graph(4)
    assert resistance_distance(g, Q1, Q2) == 1
    assert resistance_distance(g, Q2, Q3) == 2
    assert resistance_distance(g, Q0, Q1) == HALF


def test_distance_level_compatibility():
    metric = Metric(HALF)
    pairs = [(Q0, Q2), (("02", 1), Q3), (("23", 1), ("13", 1))]
    for u, v in pairs:
        expected = metric.dist(u, v)
        for level in (2, 3, 4):
            g = build_level_graph(level)
            assert resistance_distance(g, u, v) == expected


def test_ball_radius_beyond_diameter():
    g = build_level_graph(3)
    region = ball(g, Q1, Fraction(3))
    assert not region.frontier
    assert len(region.interior) == len(g.vertices)


def test_ball_b1_structure():
    g = build_level_graph(4)
    region = ball(g, Q0, HALF)
    # the lower cell's interior lattice lies inside B(q0, 1/2)
    for v in g.vertices:
        if in_cell(v, "2") and region.distances[v] < HALF:
            assert v in region.interior
    assert canonicalize("0", 1) not in region.interior  # q1 sits at distance 1/2
    assert ("", 1) in region.frontier


def test_ball_frontier_contains_apex_n2():
    g = ball_graph(2, 5)
    region = ball(g, Q0, Fraction(1, 4))
    assert canonicalize("02", 1) in region.frontier
    assert region.upper_boundary and region.lower_boundary
    assert all(v[0].startswith("0") for v in region.upper_boundary)
    assert all(v[0].startswith("2") for v in region.lower_boundary)


def test_ball_monotone_in_radius():
    g = build_level_graph(4)
    small = ball(g, Q0, Fraction(1, 4))
    big = ball(g, Q0, HALF)
    assert small.interior <= big.interior


def test_ball_graph_matches_full_graph():
    """The trimmed ball subgraph reproduces full-graph distances and frontier."""
    full = build_level_graph(5)
    trimmed = ball_graph(1, 5)
    rf = ball(full, Q0, HALF)
    rt = ball(trimmed, Q0, HALF)
    assert rf.interior == rt.interior
    assert rf.frontier == rt.frontier
    for v in rt.interior:
        assert rf.distances[v] == rt.distances[v]


def test_cut_edges_cross_the_radius():
    g = ball_graph(1, 5)
    region = ball(g, Q0, HALF)
    for u, v, frac in region.cut_edges:
        assert region.distances[u] < HALF <= region.distances[v]
        assert 0 < frac <= 1


def test_ball_cell_words_cover():
    words = ball_cell_words(2, 6)
    assert len(set(words)) == len(words)
    assert all(len(w) == 6 for w in words)
    assert all(w[0] == "2" or w.startswith("02") for w in words)


def test_export_json_round_trip():
    import json

    g = build_level_graph(1, Fraction(1, 3))
    data = json.loads(g.to_json())
    assert data["level"] == 1
    assert data["s0"] == "1/3"
    assert len(data["vertices"]) == 9
    assert len(data["edges"]) == 8
