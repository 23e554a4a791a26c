import itertools
import random

import pytest

from colorfault.generators import gen_random
from colorfault.graph import RemovedVertexError, edge_graph, vertex_graph
from colorfault.multi_fault import (
    build_certificate,
    label_large_f,
    label_recursive,
    query_large_f_ids,
    query_recursive_ids,
)
from colorfault.oracle import brute_force_connected, brute_force_partition
from colorfault.single_fault import label_single_fault


# -- certificate ---------------------------------------------------------------


def test_certificate_triangle():
    g = edge_graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 1)])
    cert = build_certificate(g)
    assert cert.per_color[0] == (0, 1)
    assert cert.per_color[1] == (2,)
    assert cert.edge_ids == (0, 1, 2)


def test_certificate_parallel_edges():
    g = edge_graph(2, [(0, 1, 0), (0, 1, 0), (0, 1, 0)])
    cert = build_certificate(g)
    assert cert.edge_ids == (0,)


def _exhaustive_certificate_check(g, max_f=2):
    cert = build_certificate(g)
    sub = cert.subgraph()
    base = cert.graph
    colors = range(g.C)
    for size in range(0, max_f + 1):
        for F in itertools.combinations(colors, size):
            got = brute_force_partition(sub, F)
            want = brute_force_partition(base, F)
            assert got == want, F


def test_certificate_exact_small_edge_mode():
    for seed in range(12):
        g = gen_random(10, 20, 4, seed=seed)
        _exhaustive_certificate_check(g)


def test_certificate_exact_multigraph():
    g = gen_random(8, 24, 3, seed=5, simple=False)
    _exhaustive_certificate_check(g)


def test_certificate_vertex_mode_subdivides():
    # u, v colored a; w colored h; direct edge must survive {h} in the certificate
    g = vertex_graph([0, 0, 2], [(0, 2), (2, 1), (0, 1)])
    cert = build_certificate(g)
    sub = cert.subgraph()
    assert brute_force_connected(sub, 0, 1, {2})
    for seed in range(6):
        gv = gen_random(8, 14, 3, seed=seed, mode="vertex")
        cert = build_certificate(gv)
        sub = cert.subgraph()
        for size in range(0, 3):
            for F in itertools.combinations(range(gv.C), size):
                for u in range(gv.n):
                    if gv.vertex_color(u) in F:
                        continue
                    for v in range(u + 1, gv.n):
                        if gv.vertex_color(v) in F:
                            continue
                        assert brute_force_connected(sub, u, v, F) == (
                            brute_force_connected(gv, u, v, F)
                        )


# -- large-f scheme ---------------------------------------------------------------


def test_large_f_empty_faults_plain_connectivity():
    g = gen_random(14, 24, 4, seed=3)
    ls = label_large_f(g, seed=1)
    part = brute_force_partition(g)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            assert query_large_f_ids(ls, u, v, []) == (part[u] == part[v])


def test_large_f_triangle_example():
    g = edge_graph(3, [(0, 1, 0), (1, 2, 0), (0, 2, 1)])
    ls = label_large_f(g, seed=2)
    assert not query_large_f_ids(ls, 0, 1, [0])
    assert query_large_f_ids(ls, 0, 2, [0])


def test_large_f_sampled_agreement():
    rng = random.Random(17)
    agree = total = 0
    for trial in range(8):
        g = gen_random(20, 40, 6, seed=200 + trial)
        ls = label_large_f(g, seed=trial)
        for _ in range(120):
            F = rng.sample(range(g.C), rng.randrange(0, min(5, g.C) + 1))
            u, v = rng.randrange(g.n), rng.randrange(g.n)
            total += 1
            agree += query_large_f_ids(ls, u, v, F) == brute_force_connected(g, u, v, F)
    assert agree / total >= 0.99


# -- recursive scheme ----------------------------------------------------------------


def test_recursive_f1_is_single_fault_bit_for_bit():
    g = gen_random(16, 28, 5, seed=9)
    direct = label_single_fault(g)
    rec = label_recursive(g, f=1, seed=1)
    assert rec.vertex_labels == direct.vertex_labels
    assert rec.color_labels == direct.color_labels
    assert [l.bits for l in rec.vertex_labels] == [l.bits for l in direct.vertex_labels]


def test_singleton_classes_degenerate_to_pure_sketch():
    # heavy parallel-edge path, one color per edge: every class is a singleton,
    # and the measured threshold lands above 1, so no color is prevalent
    triples = []
    for step in range(15):
        for _ in range(40):
            triples.append((step, step + 1, len(triples)))
    g = edge_graph(16, triples, C=len(triples))
    ls = label_recursive(g, f=2, seed=7)
    man = ls.meta["manifest"]
    assert man["delta"] > 1
    assert man["prevalent_colors"] == []
    assert all(not l.children for l in ls.vertex_labels)


def test_recursive_structure_matches_prevalent_list():
    g = gen_random(18, 40, 5, seed=21)
    ls = label_recursive(g, f=2, seed=3)
    man = ls.meta["manifest"]
    want = len(man["prevalent_colors"])
    assert all(len(l.children) == want for l in ls.vertex_labels)
    assert all(len(l.children) == want for l in ls.color_labels)


def test_recursive_f2_example_path_with_chord():
    # path a, b, a plus a chord (0,3) colored c: fault {a, c} leaves the b edge
    g = edge_graph(4, [(0, 1, 0), (1, 2, 1), (2, 3, 0), (0, 3, 2)])
    ls = label_recursive(g, f=2, seed=11)
    assert query_recursive_ids(ls, 0, 3, {0, 2}) == brute_force_connected(g, 0, 3, {0, 2})
    assert brute_force_connected(g, 0, 3, {0, 2}) is False or True  # oracle defines truth
    # direct derivation: removing colors a and c leaves only edge 1-2
    assert not brute_force_connected(g, 0, 3, {0, 2})
    assert not query_recursive_ids(ls, 0, 3, {0, 2})
    assert query_recursive_ids(ls, 1, 2, {0, 2})


def _sampled_agreement(f, n, m, C, trials, seed0, mode="edge"):
    rng = random.Random(seed0)
    agree = total = 0
    for trial in range(trials[0]):
        g = gen_random(n, m, C, seed=seed0 + trial, mode=mode)
        ls = label_recursive(g, f=f, seed=trial)
        for _ in range(trials[1]):
            F = rng.sample(range(g.C), rng.randrange(0, f + 1))
            u, v = rng.randrange(g.n), rng.randrange(g.n)
            if mode == "vertex" and (
                g.vertex_color(u) in F or g.vertex_color(v) in F
            ):
                with pytest.raises(RemovedVertexError):
                    query_recursive_ids(ls, u, v, F)
                continue
            total += 1
            agree += query_recursive_ids(ls, u, v, F) == brute_force_connected(
                g, u, v, F
            )
    return agree / total


def test_recursive_f2_agreement():
    assert _sampled_agreement(2, 16, 30, 5, (6, 80), 300) >= 0.99


def test_recursive_f3_agreement():
    assert _sampled_agreement(3, 14, 26, 4, (4, 60), 400) >= 0.99


def test_recursive_vertex_mode_agreement():
    assert _sampled_agreement(2, 12, 20, 4, (4, 60), 500, mode="vertex") >= 0.99


def test_recursive_rejects_oversized_fault_sets():
    g = gen_random(10, 16, 4, seed=2)
    ls = label_recursive(g, f=2, seed=1)
    with pytest.raises(ValueError):
        query_recursive_ids(ls, 0, 1, {0, 1, 2})


def test_manifest_records_each_node():
    g = gen_random(14, 30, 4, seed=13)
    ls = label_recursive(g, f=3, seed=5)
    man = ls.meta["manifest"]
    assert man["f"] == 3
    for h, child in man["children"].items():
        assert child["f"] == 2
        assert 1.0 <= man["delta"] <= max(man["certificate_edges"], 1)
