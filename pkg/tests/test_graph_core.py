import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorfault.graph import (
    ColoredGraph,
    GraphError,
    InvalidFaultSetError,
    ParseError,
    RemovedVertexError,
    bfs_tree,
    cid,
    components,
    components_per_color,
    connected,
    edge_graph,
    parse_graph,
    reduce_between_modes,
    remove_colors,
    serialize_graph,
    spanning_forest,
    vertex_graph,
)
from colorfault.generators import gen_path, gen_random
from colorfault.oracle import brute_force_connected, brute_force_partition

RED, BLUE = 0, 1

TRIANGLE = edge_graph(3, [(0, 1, RED), (0, 2, BLUE), (1, 2, RED)])
# path 0-1-2-3 with edge colors a, b, a
PATH_ABA = edge_graph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 0)])


def random_graphs(seed_base=0, count=10, n=20, m=35, C=5, mode="edge"):
    return [gen_random(n, m, C, seed=seed_base + i, mode=mode) for i in range(count)]


# -- remove_colors ------------------------------------------------------------


def test_remove_colors_triangle():
    view = remove_colors(TRIANGLE, {RED})
    assert [(eid, u, v) for eid, u, v in view.surviving_edges()] == [(1, 0, 2)]


def test_remove_nothing_is_identity():
    view = remove_colors(TRIANGLE, set())
    assert list(view.surviving_edges()) == [(0, 0, 1), (1, 0, 2), (2, 1, 2)]


def test_remove_colors_bad_color():
    with pytest.raises(InvalidFaultSetError):
        remove_colors(TRIANGLE, {7})


def test_remove_colors_matches_union_find_partition():
    g = gen_random(20, 35, 5, seed=7)
    assert components(remove_colors(g, {3})) == brute_force_partition(g, {3})


def test_vertex_mode_removal_isolates():
    g = vertex_graph([0, 1, 0], [(0, 1), (1, 2), (0, 2)])
    view = remove_colors(g, {1})
    assert not view.vertex_present(1)
    assert list(view.surviving_edges()) == [(2, 0, 2)]
    assert components(view)[1] is None


# -- cid -----------------------------------------------------------------------


def test_cid_triangle_examples():
    assert cid(TRIANGLE, 2, {RED}) == 0
    assert cid(TRIANGLE, 1, {RED}) == 1


def test_cid_path_aba():
    assert cid(PATH_ABA, 2, {1}) == 2


def test_cid_errors():
    with pytest.raises(GraphError):
        cid(TRIANGLE, 9)
    g = vertex_graph([0, 1], [(0, 1)])
    with pytest.raises(RemovedVertexError):
        cid(g, 0, {0})


def test_cid_no_fault_matches_union_find():
    for g in random_graphs():
        part = brute_force_partition(g)
        for v in range(g.n):
            best = cid(g, v)
            assert best == part[v]
            assert best <= v


# -- spanning forest -----------------------------------------------------------


def test_spanning_forest_triangle():
    assert spanning_forest(TRIANGLE) == (0, 1)


def test_spanning_forest_empty_and_tree():
    empty = edge_graph(3, [], C=1)
    assert spanning_forest(empty) == ()
    tree = edge_graph(4, [(0, 1, 0), (1, 2, 0), (1, 3, 0)])
    assert spanning_forest(tree) == (0, 1, 2)


def test_spanning_forest_is_maximal_and_acyclic():
    for g in random_graphs(seed_base=50):
        forest = spanning_forest(g)
        sub = edge_graph(
            g.n, [(g.edges[e][0], g.edges[e][1], 0) for e in forest], C=1
        )
        assert components(sub) == components(g)
        assert len(forest) == g.n - len(set(components(g)))


# -- bfs -----------------------------------------------------------------------


def test_bfs_depths_path_and_star():
    path = gen_path(4)
    assert bfs_tree(path, 0).depth == (0, 1, 2, 3)
    star = edge_graph(5, [(0, i, 0) for i in range(1, 5)])
    assert bfs_tree(star, 0).depth == (0, 1, 1, 1, 1)


def test_bfs_matches_all_pairs_shortest_paths():
    g = gen_random(25, 45, 4, seed=3)
    # Floyd-Warshall oracle
    INF = 10**9
    dist = [[INF] * g.n for _ in range(g.n)]
    for v in range(g.n):
        dist[v][v] = 0
    for u, v in g.edges:
        if u != v:
            dist[u][v] = dist[v][u] = 1
    for w in range(g.n):
        dw = dist[w]
        for u in range(g.n):
            du = dist[u]
            duw = du[w]
            if duw == INF:
                continue
            for v in range(g.n):
                if duw + dw[v] < du[v]:
                    du[v] = duw + dw[v]
    depth = bfs_tree(g, 0).depth
    for v in range(g.n):
        assert depth[v] == (dist[0][v] if dist[0][v] < INF else -1)


# -- mode reduction --------------------------------------------------------------


def test_reduce_counts_triangle():
    r = reduce_between_modes(TRIANGLE)
    assert r.n == 6 and r.m == 6 and r.mode == "vertex" and r.C == TRIANGLE.C + 1


def test_reduce_single_edge():
    g = edge_graph(2, [(0, 1, 0)], C=1)
    r = reduce_between_modes(g)
    assert r.vertex_colors == (1, 1, 0)
    assert r.C == 2
    assert sorted(r.edges) == [(0, 2), (2, 1)] or list(r.edges) == [(0, 2), (2, 1)]


def test_reduce_preserves_connectivity_up_to_two_faults():
    import itertools

    g = gen_random(16, 28, 4, seed=11)
    r = reduce_between_modes(g)
    for size in (0, 1, 2):
        for F in itertools.combinations(range(g.C), size):
            a = brute_force_partition(g, F)
            for u in range(g.n):
                for v in range(u + 1, g.n):
                    assert (a[u] == a[v]) == brute_force_connected(r, u, v, F)


def test_reduce_vertex_to_edge_round():
    g = gen_random(12, 20, 3, seed=5, mode="vertex")
    r = reduce_between_modes(g)
    assert r.mode == "edge" and r.n == g.n + g.m and r.m == 2 * g.m
    for c in range(g.C):
        for u in range(g.n):
            if g.vertex_color(u) == c:
                continue
            for v in range(u + 1, g.n):
                if g.vertex_color(v) == c:
                    continue
                assert brute_force_connected(g, u, v, {c}) == brute_force_connected(
                    r, u, v, {c}
                )


# -- text format -----------------------------------------------------------------


def test_parse_header_example():
    text = "ccg 1 edge 3 3 2\n0 1 0\n0 2 1\n1 2 0\n"
    assert parse_graph(text) == TRIANGLE


def test_serialize_parse_identity():
    assert parse_graph(serialize_graph(TRIANGLE)) == TRIANGLE
    canonical = serialize_graph(TRIANGLE)
    assert serialize_graph(parse_graph(canonical)) == canonical


def test_parse_comments_and_blank_lines():
    text = "# a triangle\nccg 1 edge 3 3 2\n0 1 0 # first\n\n0 2 1\n1 2 0\n"
    assert parse_graph(text) == TRIANGLE


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as e:
        parse_graph("ccg 1 edge 3 3 2\n0 1 0\n0 9 1\n1 2 0\n")
    assert e.value.line == 3
    with pytest.raises(ParseError) as e:
        parse_graph("ccg 1 edge 3 3 2\n0 1 0\n")
    assert "2 data lines" in str(e.value) or "expected 3" in str(e.value)
    with pytest.raises(ParseError):
        parse_graph("ccg 2 edge 1 0 1\n")


def test_round_trip_preserves_edge_multiset():
    g = gen_random(15, 40, 6, seed=9, simple=False)
    h = parse_graph(serialize_graph(g))
    assert sorted(zip(h.edges, h.edge_colors)) == sorted(zip(g.edges, g.edge_colors))


def test_vertex_mode_round_trip():
    g = gen_random(10, 14, 3, seed=2, mode="vertex")
    assert parse_graph(serialize_graph(g)) == g


# -- invariants ---------------------------------------------------------------


@given(st.integers(0, 2**30))
@settings(max_examples=25, deadline=None)
def test_monotone_removal(seed):
    g = gen_random(14, 24, 5, seed=seed)
    small = components(remove_colors(g, {0}))
    big = components(remove_colors(g, {0, 1}))
    # every component under the larger fault set refines the smaller one
    rep: dict[int, int] = {}
    for v in range(g.n):
        b = big[v]
        if b not in rep:
            rep[b] = small[v]
        assert rep[b] == small[v]


@given(st.integers(0, 2**30), st.sampled_from(["edge", "vertex"]))
@settings(max_examples=20, deadline=None)
def test_components_per_color_matches_brute_force(seed, mode):
    g = gen_random(12, 20, 4, seed=seed, mode=mode)
    sweep = components_per_color(g)
    for c in range(g.C):
        assert sweep[c] == brute_force_partition(g, {c})


def test_dual_oracles_agree_on_random_queries():
    import random

    rng = random.Random(123)
    g = gen_random(30, 60, 6, seed=42)
    for _ in range(1000):
        u, v, c = rng.randrange(g.n), rng.randrange(g.n), rng.randrange(g.C)
        assert brute_force_connected(g, u, v, {c}) == connected(g, u, v, {c})


def test_self_loops_do_not_affect_connectivity():
    g = edge_graph(3, [(0, 0, 0), (1, 2, 1)])
    assert components(g) == [0, 1, 1]
    assert spanning_forest(g) == (1,)


def test_construction_validation():
    with pytest.raises(GraphError):
        ColoredGraph(n=2, mode="edge", edges=((0, 5),), C=1, edge_colors=(0,))
    with pytest.raises(GraphError):
        edge_graph(2, [(0, 1, 3)], C=2)
    with pytest.raises(GraphError):
        vertex_graph([0, 1], [(0, 1)], C=1)
