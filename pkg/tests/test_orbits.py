import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grigorchuk import tree
from grigorchuk.groups import build_group, explicit_grigorchuk
from grigorchuk.growth import ResourceCap
from grigorchuk.orbits import (
    brute_force_inverted_orbit_growth, graph_growth, inverted_orbit, inverted_orbit_growth,
    level_graph, orbit_graph_ball, to_edge_list, to_json,
)
from grigorchuk.tree import BoundaryPoint, ONE_RAY, ZERO_RAY

G = explicit_grigorchuk()
KNOWN_DELTA = [1, 2, 3, 4, 5, 6, 6, 7]


def test_level_graph_is_a_bijective_action(ctx_xi):
    for k in range(1, 8):
        g = level_graph(ctx_xi, k)
        assert len(g.vertices) == 2 ** k
        for s, m in g.edges.items():
            assert sorted(m.values()) == sorted(g.vertices)
            for v, u in m.items():
                assert tree.apply(G[s], v) == u
                assert m[u] == v
        assert g.is_connected()


def test_level_graph_is_a_path(ctx_xi):
    # seen from the end 1^k, every sphere has one vertex
    g = level_graph(ctx_xi, 6)
    assert graph_growth(g, (1,) * 6) == list(range(1, 65))


def test_level_graph_cap(ctx_xi):
    with pytest.raises(ResourceCap):
        level_graph(ctx_xi, 5, max_vertices=16)
    with pytest.raises(ValueError):
        level_graph(ctx_xi, 0)


def test_orbit_ball_small(ctx_xi):
    g = orbit_graph_ball(ctx_xi, ZERO_RAY, 3)
    names = sorted(map(str, g.vertices))
    assert names == ["(0)", "001(0)", "01(0)", "1(0)", "101(0)", "11(0)", "1101(0)"]
    assert g.edges["d"][ZERO_RAY] == ZERO_RAY


def test_orbit_ball_matches_level_graph(ctx_xi):
    # near 0^k the level-k graph looks like the orbital graph
    k, r = 12, 60
    orbital = graph_growth(orbit_graph_ball(ctx_xi, ZERO_RAY, r))
    level = graph_growth(level_graph(ctx_xi, k), (0,) * k)
    assert orbital == level[: r + 1]


def test_orbit_edges_are_tree_actions(ctx_xi):
    g = orbit_graph_ball(ctx_xi, BoundaryPoint.parse("10(0)"), 12)
    for v, s, u in g.edge_list():
        assert u.truncate(20) == tree.apply(G[s], v.truncate(20))


def test_cofinal_with_one_ray_rejected(ctx_xi):
    with pytest.raises(ValueError):
        orbit_graph_ball(ctx_xi, ONE_RAY, 3)
    with pytest.raises(ValueError):
        inverted_orbit_growth(ctx_xi, BoundaryPoint.parse("0(1)"), 3)


def test_orbit_ball_cap(ctx_xi):
    with pytest.raises(ResourceCap):
        orbit_graph_ball(ctx_xi, ZERO_RAY, 50, max_vertices=20)


def test_exports(ctx_xi):
    g = orbit_graph_ball(ctx_xi, ZERO_RAY, 1)
    lines = to_edge_list(g).splitlines()
    assert "(0)\ta\t1(0)" in lines
    assert all(len(line.split("\t")) == 3 for line in lines)
    data = json.loads(json.dumps(to_json(level_graph(ctx_xi, 2))))
    assert data["schema"] == "schreier/1"
    assert data["vertices"] == ["00", "01", "10", "11"]
    assert len(data["edges"]) == 16


def test_inverted_orbit_definition(ctx_xi):
    # right action: x.ab applies a first
    pts = inverted_orbit(ctx_xi, "ab")
    b0 = tree.apply_boundary(G["b"], ZERO_RAY)
    ab0 = tree.apply_boundary(G["b"], tree.apply_boundary(G["a"], ZERO_RAY))
    assert pts == {ZERO_RAY, b0, ab0}
    assert inverted_orbit(ctx_xi, "") == {ZERO_RAY}


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="abcd", max_size=10))
def test_inverted_orbit_against_truncated_action(word):
    ctx = build_group("(012)*", verify_depth=0)
    depth = 24
    x = ZERO_RAY.truncate(depth)
    expected = {x}
    for k in range(len(word)):
        v = x
        for s in word[k:]:
            v = tree.apply(G[s], v)
        expected.add(v)
    got = {p.truncate(depth) for p in inverted_orbit(ctx, word)}
    assert got == expected


def test_pruned_search_matches_brute_force(ctx_xi):
    for n in range(7):
        fast = inverted_orbit_growth(ctx_xi, ZERO_RAY, n)
        slow = brute_force_inverted_orbit_growth(ctx_xi, n)
        assert fast == slow
        assert fast.delta == KNOWN_DELTA[n]
        assert len(inverted_orbit(ctx_xi, fast.witness)) == fast.delta


def test_inverted_orbit_other_base(ctx_xi):
    base = BoundaryPoint.parse("01(0)")
    for n in range(5):
        fast = inverted_orbit_growth(ctx_xi, base, n)
        assert fast == brute_force_inverted_orbit_growth(ctx_xi, n, base)


def test_inverted_orbit_cap(ctx_xi):
    with pytest.raises(ResourceCap):
        inverted_orbit_growth(ctx_xi, ZERO_RAY, 13)


def test_delta_is_monotone_and_sublinear(ctx_xi):
    d = [inverted_orbit_growth(ctx_xi, ZERO_RAY, n).delta for n in range(11)]
    assert np.all(np.diff(d) >= 0)
    assert all(d[n] <= n + 1 for n in range(11))
