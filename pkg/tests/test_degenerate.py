"""Degenerate inputs: empty graphs, singletons, loop-only graphs."""

import pytest

from colorfault.graph import ColoredGraph, components, parse_graph, serialize_graph
from colorfault.multi_fault import build_certificate, label_recursive
from colorfault.nca import build_one_fault_oracle
from colorfault.single_fault import build_ruling_set, label_single_fault
from colorfault.two_fault import label_two_fault


EMPTY = ColoredGraph(n=0, mode="edge", edges=(), C=0, edge_colors=())
SINGLETON = ColoredGraph(n=1, mode="edge", edges=(), C=1, edge_colors=())
LOOPY = ColoredGraph(n=2, mode="edge", edges=((0, 0), (1, 1)), C=1,
                     edge_colors=(0, 0))


def test_empty_graph_round_trip():
    assert parse_graph(serialize_graph(EMPTY)) == EMPTY
    assert components(EMPTY) == []
    assert build_ruling_set(EMPTY).k == 1
    ls = label_single_fault(EMPTY)
    assert ls.vertex_labels == () and ls.color_labels == ()


def test_singleton_labels():
    ls = label_single_fault(SINGLETON)
    assert ls.vertex_labels[0].anchor == 0
    assert label_two_fault(SINGLETON).vertex_labels[0].entries == {}
    oracle = build_one_fault_oracle(SINGLETON)
    assert oracle.query(0, 0, 0)


def test_loop_only_graph():
    ls = label_single_fault(LOOPY)
    from colorfault.single_fault import query_single_fault

    assert query_single_fault(ls.vertex_labels[1], ls.color_labels[0]) == 1
    cert = build_certificate(LOOPY)
    assert cert.edge_ids == ()
    rec = label_recursive(LOOPY, f=2, seed=0)
    from colorfault.multi_fault import query_recursive_ids

    assert not query_recursive_ids(rec, 0, 1, {0})
    assert not query_recursive_ids(rec, 0, 1, set())


def test_vertex_mode_singleton():
    g = ColoredGraph(n=1, mode="vertex", edges=(), C=1, vertex_colors=(0,))
    ls = label_single_fault(g)
    from colorfault.graph import RemovedVertexError
    from colorfault.single_fault import query_single_fault

    with pytest.raises(RemovedVertexError):
        query_single_fault(ls.vertex_labels[0], ls.color_labels[0])
