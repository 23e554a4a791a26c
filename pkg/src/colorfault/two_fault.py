"""Deterministic labels for two color faults on bounded-diameter graphs.

Per component, a BFS tree T rooted at the minimum id s.  For each vertex v and
each color c on T[s,v], a BFS of G-c from v is truncated at ceil(sqrt n)
vertices: a smaller tree spans v's whole component of G-c, a full one is hit by
a greedily chosen set U.  The vertex label stores cid(v, G-c), the pair cids
for every color in the truncated tree, and, for full trees, a representative
u in U with the pair cids along T[s,u].  A color label covers all of U.  The
five-way case analysis at query time resolves cid(v, G-{c,d}) from the two
vertex labels and two color labels alone, exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Collection, Sequence

from .bits import id_width, width_for
from .graph import (
    EDGE,
    VERTEX,
    ColoredGraph,
    GraphView,
    RemovedVertexError,
    bfs_tree,
    components,
    remove_colors,
)
from .labels import LabelSet
from .oracle import brute_force_partition

SCHEME = "two-fault-diam"


# -- greedy hitting set ----------------------------------------------------------


def greedy_hitting_set(sets: Sequence[Collection[int]], n: int) -> tuple[int, ...]:
    """Hit every set, repeatedly taking the vertex covering the most still-unhit
    sets (minimum id on ties)."""
    for i, s in enumerate(sets):
        if not s:
            raise ValueError(f"set {i} is empty and cannot be hit")
    covers: dict[int, set[int]] = {}
    for i, s in enumerate(sets):
        for v in s:
            if not 0 <= v < n:
                raise ValueError(f"element {v} outside universe of size {n}")
            covers.setdefault(v, set()).add(i)
    unhit = set(range(len(sets)))
    chosen: list[int] = []
    while unhit:
        best_v = -1
        best_gain = 0
        for v in sorted(covers):
            gain = len(covers[v] & unhit)
            if gain > best_gain:
                best_gain = gain
                best_v = v
        chosen.append(best_v)
        unhit -= covers[best_v]
    return tuple(sorted(chosen))


# -- data types -------------------------------------------------------------------


@dataclass(frozen=True)
class TruncatedTree:
    origin: int
    excluded_color: int
    vertices: tuple[int, ...]
    parent: dict[int, int]
    colors: frozenset[int]  # colors present in the tree
    full: bool


@dataclass(frozen=True)
class ColorEntry:
    cid_minus_c: int
    pair_cids: dict[int, int]  # d in tree colors -> cid(v, G-{c,d})
    full: bool
    rep: int | None
    rep_pair_cids: dict[int, int]  # d on T[s,rep] -> cid(rep, G-{c,d})


@dataclass(frozen=True)
class TwoFaultVertexLabel:
    vertex: int
    root_id: int
    own_color: int | None
    entries: dict[int, ColorEntry]  # keyed by color on T[s,v]
    bits: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TwoFaultColorLabel:
    color: int
    pairs: dict[tuple[int, int], int]  # (u in U, d on T[s,u]) -> cid(u, G-{color,d})
    bits: int = field(default=0, compare=False)


def truncated_bfs(gv: GraphView, origin: int, cap: int, excluded_color: int) -> TruncatedTree:
    """BFS from origin halting once ``cap`` vertices are reached."""
    order = [origin]
    parent: dict[int, int] = {}
    tree_edges: list[int] = []
    seen = {origin}
    head = 0
    while head < len(order) and len(order) < cap:
        x = order[head]
        head += 1
        for w, eid in gv.adjacency(x):
            if w not in seen:
                seen.add(w)
                parent[w] = x
                tree_edges.append(eid)
                order.append(w)
                if len(order) >= cap:
                    break
    g = gv.graph
    if g.mode == EDGE:
        colors = {g.edge_color(eid) for eid in tree_edges}
    else:
        colors = {g.vertex_color(w) for w in order}
    return TruncatedTree(
        origin=origin,
        excluded_color=excluded_color,
        vertices=tuple(order),
        parent=parent,
        colors=frozenset(colors),
        full=len(order) >= cap,
    )


def _tree_edge_color(gv: GraphView, child: int, parent: int) -> int:
    for nbr, eid in gv.adjacency(child):
        if nbr == parent:
            return gv.graph.edge_color(eid)
    raise AssertionError("parent edge vanished")


def _path_colors_to_root(g: ColoredGraph, tree, v: int) -> set[int]:
    """Colors on T[s,v]; vertex mode includes both endpoints, minus v's own."""
    path = tree.path_to_root(v)
    if g.mode == EDGE:
        return {
            g.edge_color(tree.parent_edge[x])
            for x in path[:-1]
        }
    return {g.vertex_color(x) for x in path} - {g.vertex_color(v)}


class _PairCids:
    """Cache of component-id arrays under two-color fault sets."""

    def __init__(self, g: ColoredGraph):
        self.g = g
        self.cache: dict[frozenset[int], list[int | None]] = {}

    def partition(self, c: int, d: int) -> list[int | None]:
        key = frozenset((c, d))
        part = self.cache.get(key)
        if part is None:
            part = self.cache[key] = brute_force_partition(self.g, key)
        return part

    def cid(self, v: int, c: int, d: int) -> int:
        value = self.partition(c, d)[v]
        assert value is not None
        return value


def label_two_fault(g: ColoredGraph) -> LabelSet:
    cap = math.isqrt(g.n) if math.isqrt(g.n) ** 2 == g.n else math.isqrt(g.n) + 1
    cap = max(cap, 1)
    gv = remove_colors(g, ())
    comp = components(gv)
    roots = sorted({c for c in comp if c is not None})
    trees = {s: bfs_tree(gv, s) for s in roots}
    depth_max = 0
    for s in roots:
        depth_max = max(depth_max, max((d for d in trees[s].depth if d >= 0), default=0))

    path_colors: list[set[int]] = []
    for v in range(g.n):
        tree = trees[comp[v]]
        path_colors.append(_path_colors_to_root(g, tree, v))

    single = _PairCids(g)  # pair cache also answers c == d
    truncated: dict[tuple[int, int], TruncatedTree] = {}
    full_family: list[tuple[tuple[int, int], TruncatedTree]] = []
    for v in range(g.n):
        for c in sorted(path_colors[v]):
            t = truncated_bfs(remove_colors(g, {c}), v, cap, c)
            truncated[(v, c)] = t
            if t.full:
                full_family.append(((v, c), t))

    if full_family:
        U = greedy_hitting_set([t.vertices for _key, t in full_family], g.n)
    else:
        U = ()
    in_U = set(U)

    wid = id_width(max(g.n, 2))
    wc = width_for(max(g.C, 2))
    wlen = width_for(g.n + 1)

    vertex_labels = []
    for v in range(g.n):
        entries: dict[int, ColorEntry] = {}
        for c in sorted(path_colors[v]):
            t = truncated[(v, c)]
            own = g.vertex_color(v) if g.mode == VERTEX else None
            pair_cids = {
                d: single.cid(v, c, d)
                for d in sorted(t.colors)
                if d != own
            }
            rep = None
            rep_pairs: dict[int, int] = {}
            if t.full:
                rep = min(w for w in t.vertices if w in in_U)
                rep_own = g.vertex_color(rep) if g.mode == VERTEX else None
                rep_pairs = {
                    d: single.cid(rep, c, d)
                    for d in sorted(path_colors[rep])
                    if d != rep_own
                }
            entries[c] = ColorEntry(
                cid_minus_c=single.cid(v, c, c),
                pair_cids=pair_cids,
                full=t.full,
                rep=rep,
                rep_pair_cids=rep_pairs,
            )
        bits = wid + (wc if g.mode == VERTEX else 0) + wlen
        for c, e in entries.items():
            bits += wc + wid + 1 + wlen + len(e.pair_cids) * (wc + wid)
            if e.full:
                bits += wid + wlen + len(e.rep_pair_cids) * (wc + wid)
        vertex_labels.append(
            TwoFaultVertexLabel(
                v,
                root_id=comp[v],  # type: ignore[arg-type]
                own_color=g.vertex_color(v) if g.mode == VERTEX else None,
                entries=entries,
                bits=bits,
            )
        )

    color_labels = []
    for c in range(g.C):
        pairs: dict[tuple[int, int], int] = {}
        for u in U:
            if g.mode == VERTEX and g.vertex_color(u) == c:
                continue  # u itself dies with c; never consulted for this color
            own = g.vertex_color(u) if g.mode == VERTEX else None
            for d in sorted(path_colors[u]):
                if d == own:
                    continue
                pairs[(u, d)] = single.cid(u, c, d)
        bits = wc + wlen + len(pairs) * (wid + wc + wid)
        color_labels.append(TwoFaultColorLabel(c, pairs, bits))

    return LabelSet(
        scheme=SCHEME,
        n=g.n,
        C=g.C,
        mode=g.mode,
        vertex_labels=tuple(vertex_labels),
        color_labels=tuple(color_labels),
        meta={
            "cap": cap,
            "depth": depth_max,
            "hitting_set": U,
            "full_trees": len(full_family),
        },
    )


def _derive_cid(
    lv: TwoFaultVertexLabel,
    lc: TwoFaultColorLabel,
    ld: TwoFaultColorLabel,
) -> int:
    c, d = lc.color, ld.color
    if lv.own_color is not None and lv.own_color in (c, d):
        raise RemovedVertexError(f"vertex {lv.vertex} has a faulted color")
    have_c = c in lv.entries
    have_d = d in lv.entries
    if not have_c and not have_d:
        return lv.root_id  # the path to the component minimum survives
    if not have_c:
        c, d = d, c
        lc, ld = ld, lc
    entry = lv.entries[c]
    hit = entry.pair_cids.get(d)
    if hit is not None:
        return hit
    if not entry.full:
        # the small tree spans v's whole component of G-c and avoids d
        return entry.cid_minus_c
    rep = entry.rep
    assert rep is not None
    hit = ld.pairs.get((rep, c))
    if hit is not None:
        return hit
    hit = entry.rep_pair_cids.get(d)
    if hit is not None:
        return hit
    return lv.root_id  # neither color on T[s,rep]: rep reaches the root


def query_two_fault(
    lu: TwoFaultVertexLabel,
    lv: TwoFaultVertexLabel,
    lc: TwoFaultColorLabel,
    ld: TwoFaultColorLabel,
) -> bool:
    if lu.vertex == lv.vertex:
        if lu.own_color is not None and lu.own_color in (lc.color, ld.color):
            raise RemovedVertexError(f"vertex {lu.vertex} has a faulted color")
        return True
    return _derive_cid(lu, lc, ld) == _derive_cid(lv, lc, ld)


def query_two_fault_ids(ls: LabelSet, u: int, v: int, c: int, d: int) -> bool:
    return query_two_fault(
        ls.vertex_labels[u], ls.vertex_labels[v], ls.color_labels[c], ls.color_labels[d]
    )


def derived_cid(ls: LabelSet, v: int, c: int, d: int) -> int:
    """cid(v, G-{c,d}) as the query procedure computes it (for verification)."""
    return _derive_cid(ls.vertex_labels[v], ls.color_labels[c], ls.color_labels[d])
