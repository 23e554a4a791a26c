import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorfault.bits import width_for
from colorfault.graph import RemovedVertexError, edge_graph, vertex_graph
from colorfault.generators import gen_path, gen_random, gen_tree, gen_wheel
from colorfault.oracle import brute_force_partition
from colorfault.single_fault import (
    SizeLimitError,
    ball_packing_exact,
    ball_packing_greedy,
    build_ruling_set,
    find_disjoint_proper_balls,
    label_single_fault,
    pair_connected,
    query_single_fault,
)

PATH_ABA = edge_graph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 0)])


# -- ruling set ---------------------------------------------------------------


def test_ruling_set_path9():
    rs = build_ruling_set(gen_path(9))
    assert rs.A0 == (0,)
    assert rs.A == (1, 3, 6)
    assert rs.k == 4


def test_ruling_set_single_vertex():
    rs = build_ruling_set(edge_graph(1, [], C=1))
    assert rs.A0 == (0,) and rs.A == () and rs.k == 1


def test_ruling_set_path4():
    rs = build_ruling_set(gen_path(4))
    assert rs.A0 == (0,) and rs.A == (1, 3) and rs.k == 3


def test_ruling_set_invariants_random():
    from colorfault.graph import bfs_tree

    for seed in range(8):
        g = gen_random(24, 40, 5, seed=seed)
        rs = build_ruling_set(g)
        # distance of a_i from the prefix is exactly i
        chosen = list(rs.A0)
        for i, a in enumerate(rs.A, start=1):
            dist = min(
                d
                for d in (bfs_tree(g, s).depth[a] for s in chosen)
                if d >= 0
            )
            assert dist == i
            chosen.append(a)
        # everything is within distance < k of A0 u A
        for v in range(g.n):
            dist = min(
                (d for d in (bfs_tree(g, s).depth[v] for s in chosen) if d >= 0),
                default=math.inf,
            )
            assert dist < rs.k


# -- labels ------------------------------------------------------------------


def test_label_contents_path_aba():
    ls = label_single_fault(PATH_ABA)
    l2 = ls.vertex_labels[2]
    assert l2.anchor == 1
    assert l2.cid_by_color == {1: 2}


def test_isolated_vertex_label():
    g = edge_graph(3, [(0, 1, 0)], C=1)
    lbl = label_single_fault(g).vertex_labels[2]
    assert lbl.anchor == 2 and lbl.cid_by_color == {}


def test_map_sizes_below_k():
    for seed in range(6):
        g = gen_random(30, 50, 6, seed=seed)
        ls = label_single_fault(g)
        k = ls.meta["k"]
        assert all(len(l.cid_by_color) < k for l in ls.vertex_labels)
        assert all(len(l.cid_by_anchor) == len(ls.meta["A"]) for l in ls.color_labels)


# -- queries -------------------------------------------------------------------


def test_query_examples_path_aba():
    ls = label_single_fault(PATH_ABA)
    assert query_single_fault(ls.vertex_labels[2], ls.color_labels[1]) == 2
    assert query_single_fault(ls.vertex_labels[2], ls.color_labels[0]) == 1
    # pair (0, 3) avoiding color b: 0 vs 2 -> disconnected
    assert query_single_fault(ls.vertex_labels[0], ls.color_labels[1]) == 0
    assert query_single_fault(ls.vertex_labels[3], ls.color_labels[1]) == 2
    assert not pair_connected(ls.vertex_labels[0], ls.vertex_labels[3], ls.color_labels[1])


def _check_exact(g):
    ls = label_single_fault(g)
    for c in range(g.C):
        truth = brute_force_partition(g, {c})
        for v in range(g.n):
            if truth[v] is None:
                with pytest.raises(RemovedVertexError):
                    query_single_fault(ls.vertex_labels[v], ls.color_labels[c])
            else:
                got = query_single_fault(ls.vertex_labels[v], ls.color_labels[c])
                assert got == truth[v], (v, c)


@given(st.integers(0, 2**30), st.sampled_from(["edge", "vertex"]))
@settings(max_examples=30, deadline=None)
def test_exactness_random(seed, mode):
    g = gen_random(18, 30, 5, seed=seed, mode=mode)
    _check_exact(g)


def test_exactness_structured():
    _check_exact(gen_path(17, coloring="uniform", C=3, seed=1))
    _check_exact(gen_wheel(12, coloring="uniform", C=4, seed=2))
    _check_exact(gen_tree(20, seed=3, C=4))
    _check_exact(gen_random(20, 34, 6, seed=4, simple=False))  # multigraph


def test_exactness_disconnected():
    g = edge_graph(6, [(0, 1, 0), (1, 2, 1), (3, 4, 0)], C=2)
    _check_exact(g)


def test_vertex_mode_anchor_color_in_map():
    # anchor's color on P(v) populates the vertex map
    g = vertex_graph([0, 1, 2], [(0, 1), (1, 2)])
    ls = label_single_fault(g)
    l2 = ls.vertex_labels[2]
    assert l2.anchor in (0, 1)
    anchor_color = g.vertex_color(l2.anchor)
    assert anchor_color in l2.cid_by_color
    assert query_single_fault(l2, ls.color_labels[anchor_color]) == 2


# -- ball packing ---------------------------------------------------------------


def test_greedy_equals_k():
    assert ball_packing_greedy(gen_path(9)) == 4
    assert ball_packing_greedy(edge_graph(1, [], C=1)) == 1


def test_greedy_sqrt_bound():
    for seed in range(10):
        g = gen_random(30, 45, 5, seed=seed)
        assert ball_packing_greedy(g) <= 4 * (math.isqrt(g.n) + 1)
    assert ball_packing_greedy(gen_path(30)) <= 4 * (math.isqrt(30) + 1)


def test_exact_small_cases():
    assert ball_packing_exact(gen_path(2)) == 1
    assert ball_packing_exact(edge_graph(1, [], C=1)) == 0
    assert ball_packing_exact(gen_path(9)) == 2


def test_exact_size_limit():
    with pytest.raises(SizeLimitError):
        ball_packing_exact(gen_path(40))


def test_exact_respects_sqrt_n():
    for seed in range(6):
        g = gen_random(14, 20, 3, seed=seed)
        assert ball_packing_exact(g) <= math.sqrt(g.n)


def test_witness_balls_are_proper_and_disjoint():
    from colorfault.graph import bfs_tree

    g = gen_path(9)
    centers = find_disjoint_proper_balls(g, 2)
    assert centers is not None and len(centers) == 2
    seen = set()
    for v in centers:
        depth = bfs_tree(g, v).depth
        ball = {u for u in range(g.n) if 0 <= depth[u] <= 2}
        assert any(depth[u] == 2 for u in range(g.n))
        assert not (ball & seen)
        seen |= ball


def test_greedy_quarter_bounds_exact():
    for seed in range(12):
        g = gen_random(12, 16, 4, seed=seed)
        assert ball_packing_greedy(g) // 4 <= ball_packing_exact(g)
    for n in range(2, 15):
        g = gen_path(n)
        assert ball_packing_greedy(g) // 4 <= ball_packing_exact(g)


# -- sizes ----------------------------------------------------------------------


def test_label_bits_bound():
    for seed in range(8):
        for mode in ("edge", "vertex"):
            g = gen_random(26, 40, 7, seed=seed, mode=mode)
            ls = label_single_fault(g)
            k = ls.meta["k"]
            w = max(1, width_for(max(g.n, g.C)))
            assert ls.max_label_bits() <= 3 * k * w
