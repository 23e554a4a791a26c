"""Hop-by-hop routing that avoids every edge of one forbidden color.

The spanning tree T is assembled from the anchor-path forest of the one-fault
scheme (so every P(v) is a T-path) plus minimum-id joining edges, rooted at the
minimum-id vertex r.  For each color c on T, the tree splits into fragments;
recovery edges (minimum edge id joining two fragments) turn them into a
spanning tree T_c of G-c.  Tables hold interval tree-routing data for T, the
first-recovery-edge block toward every anchor for the fragment rooted at the
vertex (its parent edge carries the only color that ever matters there), and
T_c-routing data for colors on the vertex's anchor path.  A message carries a
small permanent header (forbidden color, target anchor a*, the root's block,
the target's tree label, and, when c lies on P(t), the block and T_c label for
the final approach) plus two mutable fields UP and NEXT.

Phase one climbs each fragment and jumps recovery edges toward a*'s fragment;
an undefined block doubles as the "already there" signal.  Phase two routes
inside the target fragment over T, optionally crossing one last recovery edge
and finishing over T_c through fragments that are guaranteed to carry tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .bits import id_width, width_for
from .graph import EDGE, ColoredGraph, GraphError, UnionFind, as_view
from .labels import LabelSet
from .single_fault import (
    RulingSet,
    anchor_paths,
    build_ruling_set,
    label_single_fault,
    pair_connected,
)


class UnreachableError(ValueError):
    """Target not connected to the source once the color fails."""


class RoutingBugError(RuntimeError):
    """Internal contract violated during simulation (must not happen)."""


# -- ported network ---------------------------------------------------------------


@dataclass(frozen=True)
class PortedNetwork:
    """Port p of vertex v is its p-th incident edge in increasing edge id."""

    graph: ColoredGraph
    ports: tuple[tuple[tuple[int, int], ...], ...]  # per vertex: (edge id, neighbor)
    port_index: dict[tuple[int, int], int]  # (vertex, edge id) -> port

    @staticmethod
    def build(g: ColoredGraph) -> "PortedNetwork":
        ports: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
        for eid, (u, v) in enumerate(g.edges):
            ports[u].append((eid, v))
            if u != v:
                ports[v].append((eid, u))
        index = {}
        for v, plist in enumerate(ports):
            plist.sort()
            for p, (eid, _nbr) in enumerate(plist):
                index[(v, eid)] = p
        return PortedNetwork(g, tuple(tuple(p) for p in ports), index)

    def deliver(self, v: int, port: int) -> tuple[int, int]:
        """(neighbor, edge id) reached by sending through the port."""
        eid, nbr = self.ports[v][port]
        return nbr, eid

    def port_of(self, v: int, eid: int) -> int:
        return self.port_index[(v, eid)]

    def max_ports(self) -> int:
        return max((len(p) for p in self.ports), default=1)


# -- interval tree routing -----------------------------------------------------------


@dataclass(frozen=True)
class TreeNodeTable:
    parent_port: int | None
    pre: int
    end: int  # subtree interval [pre, end)
    child_slots: tuple[tuple[int, int, int], ...]  # (lo, hi, port), excluded from size

    def next_port_for(self, target_label: int) -> int | None:
        """Port on the tree path toward the labeled target; None when arrived."""
        if self.pre == target_label:
            return None
        if not (self.pre <= target_label < self.end):
            if self.parent_port is None:
                raise RoutingBugError("target outside this routing tree")
            return self.parent_port
        for lo, hi, port in self.child_slots:
            if lo <= target_label < hi:
                return port
        raise RoutingBugError("interval tables inconsistent")


@dataclass(frozen=True)
class TreeRouting:
    """Tables and destination labels for one rooted tree (or forest)."""

    tables: dict[int, TreeNodeTable]
    label: dict[int, int]  # vertex -> DFS entry index

    def next_port(self, v: int, target_label: int) -> int | None:
        return self.tables[v].next_port_for(target_label)


def build_tree_routing(
    net: PortedNetwork,
    tree_edges: Iterable[int],
    roots: Iterable[int] | None = None,
    universe: Iterable[int] | None = None,
) -> TreeRouting:
    """DFS interval labeling over the given tree edges, children in id order.

    ``universe`` adds vertices that must get (singleton) tables even when no
    tree edge touches them.
    """
    g = net.graph
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    members: set[int] = set(universe) if universe is not None else set()
    for eid in tree_edges:
        u, v = g.edges[eid]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
        members.add(u)
        members.add(v)
    for a in adj:
        a.sort()
    if roots is None:
        seen: set[int] = set()
        roots_list = []
        for v in sorted(members):
            if v in seen:
                continue
            roots_list.append(v)
            stack = [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                for w, _eid in adj[x]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
    else:
        roots_list = sorted(roots)

    tables: dict[int, TreeNodeTable] = {}
    label: dict[int, int] = {}
    clock = 0
    for root in roots_list:
        stack: list[tuple[int, int | None, int | None]] = [(root, None, None)]
        order: list[tuple[int, int | None, int | None]] = []
        seen2 = {root}
        while stack:
            v, parent, peid = stack.pop()
            order.append((v, parent, peid))
            for w, eid in reversed(adj[v]):
                if w not in seen2:
                    seen2.add(w)
                    stack.append((w, v, eid))
        # assign pre indices in DFS order, then subtree sizes bottom-up
        pre: dict[int, int] = {}
        for v, _p, _e in order:
            pre[v] = clock
            clock += 1
        size = {v: 1 for v, _p, _e in order}
        for v, p, _e in reversed(order):
            if p is not None:
                size[p] += size[v]
        children: dict[int, list[tuple[int, int, int]]] = {v: [] for v, _p, _e in order}
        parent_port: dict[int, int | None] = {root: None}
        for v, p, eid in order:
            if p is None:
                continue
            parent_port[v] = net.port_of(v, eid)  # type: ignore[arg-type]
            children[p].append((pre[v], pre[v] + size[v], net.port_of(p, eid)))
        for v, _p, _e in order:
            label[v] = pre[v]
            tables[v] = TreeNodeTable(
                parent_port=parent_port[v],
                pre=pre[v],
                end=pre[v] + size[v],
                child_slots=tuple(sorted(children[v])),
            )
    return TreeRouting(tables, label)


# -- blocks and per-color recovery structure -------------------------------------------


@dataclass(frozen=True)
class FirstRecEdgeBlock:
    """First recovery edge on a directed fragment-tree path."""

    port: int  # from the first endpoint x
    x_tree_label: int  # L_T(x)
    x: int  # simulator convenience; the label above is what routing uses
    into_target_fragment: bool


@dataclass(frozen=True)
class ColorStructure:
    """Everything the scheme derives from T - c for one color c on T."""

    color: int
    fragment_of: tuple[int, ...]  # fragment root per vertex
    recovery_edges: tuple[int, ...]
    frag_adj: dict[int, list[tuple[int, int]]]  # frag root -> (other root, edge id)
    tc_routing: TreeRouting
    a_fragments: tuple[int, ...]  # fragment roots containing an anchor


@dataclass(frozen=True)
class RoutingTable:
    vertex: int
    parent_port: int | None
    parent_color: int | None
    blocks: dict[int, FirstRecEdgeBlock | None]  # anchor -> block for color c(v)
    tc_tables: dict[int, TreeNodeTable]  # color on P(v) -> T_c table
    bits: int = field(default=0, compare=False)
    child_structure_bits: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RoutingVertexLabel:
    vertex: int
    tree_label: int
    anchor: int
    per_color: dict[int, tuple[int, FirstRecEdgeBlock | None, int]]
    # color on P(v) -> (a(v,c), block e(a(v,c), v, c), L_{T_c}(v))
    bits: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RoutingColorLabel:
    color: int
    blocks: dict[int, FirstRecEdgeBlock | None]  # anchor -> FirstRecEdge(r, a, c)
    bits: int = field(default=0, compare=False)


@dataclass
class MessageHeader:
    # permanent part, written once at the source
    color: int
    a_star: int
    root_block: FirstRecEdgeBlock | None
    target_tree_label: int
    target_on_path: bool
    target_block: FirstRecEdgeBlock | None
    target_tc_label: int | None
    # mutable part: the only fields edited en route
    up: bool | None = True
    next_block: FirstRecEdgeBlock | None = None

    def permanent_bits(self, wc: int, wid: int, wport: int) -> int:
        block = wport + wid + 2
        bits = wc + wid + block + wid + 1
        if self.target_on_path:
            bits += block + wid
        return bits

    def mutable_bits(self, wid: int, wport: int) -> int:
        return 2 + 1 + wport + wid + 2


@dataclass
class RoutingScheme:
    graph: ColoredGraph
    net: PortedNetwork
    ruling: RulingSet
    anchors: tuple[int, ...]
    root: int
    tree_edges: tuple[int, ...]
    tree_parent: tuple[int | None, ...]
    tree_parent_edge: tuple[int | None, ...]
    tree_routing: TreeRouting
    colors_on_tree: frozenset[int]
    structures: dict[int, ColorStructure]
    tables: tuple[RoutingTable, ...]
    vertex_labels: tuple[RoutingVertexLabel, ...]
    color_labels: tuple[RoutingColorLabel, ...]
    connectivity: LabelSet  # one-fault labels for the pre-flight check
    path_colors: tuple[frozenset[int], ...]


def _assemble_tree(g: ColoredGraph, anchors, parent, parent_edge):
    """Anchor-path forest joined into one spanning tree by min-id edges."""
    uf = UnionFind(g.n)
    edges = [parent_edge[v] for v in range(g.n) if parent_edge[v] is not None]
    for v in range(g.n):
        if parent[v] is not None:
            uf.union(v, parent[v])
    for eid, (u, v) in enumerate(g.edges):
        if u != v and uf.union(u, v):
            edges.append(eid)
    if len(edges) != g.n - 1:
        raise GraphError("routing scheme needs a connected graph")
    return sorted(edges)


def build_routing_scheme(g: ColoredGraph) -> RoutingScheme:
    if g.mode != EDGE:
        raise GraphError("routing is defined for edge-colored graphs")
    gv = as_view(g)
    ruling = build_ruling_set(gv)
    anchors = ruling.anchors()
    parent, parent_edge, _depth, anchor_of = anchor_paths(gv, anchors)
    connectivity = label_single_fault(g, ruling)

    tree_edges = _assemble_tree(g, anchors, parent, parent_edge)
    net = PortedNetwork.build(g)
    root = 0 if g.n else -1

    # orient T at the root
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for eid in tree_edges:
        u, v = g.edges[eid]
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    for a in adj:
        a.sort()
    tparent: list[int | None] = [None] * g.n
    tparent_edge: list[int | None] = [None] * g.n
    order = [root]
    seen = {root}
    for x in order:
        for w, eid in adj[x]:
            if w not in seen:
                seen.add(w)
                tparent[w] = x
                tparent_edge[w] = eid
                order.append(w)
    tree_routing = build_tree_routing(net, tree_edges, roots=[root])

    # P(v) as chains of the anchor forest; their union is a subforest of T
    path_colors = []
    for v in range(g.n):
        colors = set()
        x = v
        while parent[x] is not None:
            colors.add(g.edge_color(parent_edge[x]))  # type: ignore[arg-type]
            x = parent[x]  # type: ignore[assignment]
        path_colors.append(frozenset(colors))

    colors_on_tree = frozenset(g.edge_color(eid) for eid in tree_edges)
    structures = {
        c: _build_color_structure(g, net, c, tree_edges, tparent, tparent_edge, anchors, root)
        for c in sorted(colors_on_tree)
    }

    tables, vertex_labels, color_labels = _build_tables_and_labels(
        g, net, anchors, anchor_of, root, tparent_edge, tree_routing,
        path_colors, structures,
    )
    return RoutingScheme(
        graph=g,
        net=net,
        ruling=ruling,
        anchors=anchors,
        root=root,
        tree_edges=tuple(tree_edges),
        tree_parent=tuple(tparent),
        tree_parent_edge=tuple(tparent_edge),
        tree_routing=tree_routing,
        colors_on_tree=colors_on_tree,
        structures=structures,
        tables=tables,
        vertex_labels=vertex_labels,
        color_labels=color_labels,
        connectivity=connectivity,
        path_colors=tuple(path_colors),
    )


def _build_color_structure(g, net, c, tree_edges, tparent, tparent_edge, anchors, root):
    n = g.n
    uf = UnionFind(n)
    for eid in tree_edges:
        if g.edge_color(eid) != c:
            u, v = g.edges[eid]
            uf.union(u, v)
    # fragment root: the unique vertex whose parent edge is c-colored (or r)
    frag_root: dict[int, int] = {}
    for v in range(n):
        pe = tparent_edge[v]
        if pe is None or g.edge_color(pe) == c:
            frag_root[uf.find(v)] = v
    fragment_of = tuple(frag_root[uf.find(v)] for v in range(n))

    recovery: list[int] = []
    frag_adj: dict[int, list[tuple[int, int]]] = {r: [] for r in frag_root.values()}
    joiner = UnionFind(n)
    for eid, (u, v) in enumerate(g.edges):
        if u == v or g.edge_color(eid) == c:
            continue
        fu, fv = fragment_of[u], fragment_of[v]
        if fu != fv and joiner.union(fu, fv):
            recovery.append(eid)
            frag_adj[fu].append((fv, eid))
            frag_adj[fv].append((fu, eid))
    tc_routing = build_tree_routing(
        net,
        [e for e in tree_edges if g.edge_color(e) != c] + recovery,
        universe=range(n),
    )
    anchor_set = set(anchors)
    a_fragments = tuple(sorted({fragment_of[a] for a in anchor_set}))
    return ColorStructure(
        color=c,
        fragment_of=fragment_of,
        recovery_edges=tuple(recovery),
        frag_adj={k: sorted(v) for k, v in frag_adj.items()},
        tc_routing=tc_routing,
        a_fragments=a_fragments,
    )


def _fragment_bfs(cs: ColorStructure, source_frag: int) -> dict[int, tuple[int, int, int]]:
    """BFS over the fragment tree from a fragment: frag -> (dist, peer, edge id).

    ``peer`` is the neighbor fragment one hop closer to the source; the edge id
    is the recovery edge between them.
    """
    out = {source_frag: (0, source_frag, -1)}
    frontier = [source_frag]
    dist = 0
    while frontier:
        nxt = []
        dist += 1
        for fr in sorted(frontier):
            for other, eid in cs.frag_adj.get(fr, ()):  # sorted lists
                if other not in out:
                    out[other] = (dist, fr, eid)
                    nxt.append(other)
        frontier = nxt
    return out


def _block_for(g, net, cs, tree_label, from_frag, to_frag) -> FirstRecEdgeBlock | None:
    """FirstRecEdge on the directed fragment path from_frag -> to_frag."""
    if from_frag == to_frag:
        return None
    reach = _fragment_bfs(cs, to_frag)
    if from_frag not in reach:
        return None
    _dist, peer, eid = reach[from_frag]
    u, v = g.edges[eid]
    x, y = (u, v) if cs.fragment_of[u] == from_frag else (v, u)
    return FirstRecEdgeBlock(
        port=net.port_of(x, eid),
        x_tree_label=tree_label[x],
        x=x,
        into_target_fragment=cs.fragment_of[y] == to_frag,
    )


def _build_tables_and_labels(
    g, net, anchors, anchor_of, root, tparent_edge, tree_routing,
    path_colors, structures,
):
    n = g.n
    wid = id_width(max(n, 2))
    wc = width_for(max(g.C, 2))
    wport = width_for(max(net.max_ports(), 2))  # ports named at other vertices
    wblock = wport + wid + 2  # port, L_T(x), into-target flag, defined flag
    anchor_list = list(anchors)

    # nearest A-fragment (and its minimum anchor) per vertex and color
    tables = []
    vertex_labels = []
    for v in range(n):
        wport_v = width_for(max(len(net.ports[v]), 2))  # the vertex's own ports
        pe = tparent_edge[v]
        pcolor = g.edge_color(pe) if pe is not None else None
        blocks: dict[int, FirstRecEdgeBlock | None] = {}
        if pcolor is not None:
            cs = structures[pcolor]
            for a in anchor_list:
                blocks[a] = _block_for(
                    g, net, cs, tree_routing.label,
                    cs.fragment_of[v], cs.fragment_of[a],
                )
        tc_tables = {
            c: structures[c].tc_routing.tables[v] for c in sorted(path_colors[v])
        }
        tbits = (wport_v + 2 * wid) + wc + 1  # R_T(v) with parent port, c(v)
        tbits += len(anchor_list) * wblock
        tbits += len(tc_tables) * (wc + wport_v + 2 * wid)
        child_bits = len(tree_routing.tables[v].child_slots) * (2 * wid + wport_v)
        child_bits += sum(
            len(t.child_slots) * (2 * wid + wport_v) for t in tc_tables.values()
        )
        tables.append(
            RoutingTable(
                vertex=v,
                parent_port=tree_routing.tables[v].parent_port,
                parent_color=pcolor,
                blocks=blocks,
                tc_tables=tc_tables,
                bits=tbits,
                child_structure_bits=child_bits,
            )
        )

        per_color: dict[int, tuple[int, FirstRecEdgeBlock | None, int]] = {}
        for c in sorted(path_colors[v]):
            cs = structures[c]
            my_frag = cs.fragment_of[v]
            reach = _fragment_bfs(cs, my_frag)
            best: tuple[int, int] | None = None  # (dist, fragment root)
            for fr in cs.a_fragments:
                if fr in reach:
                    d = reach[fr][0]
                    if best is None or (d, fr) < best:
                        best = (d, fr)
            if best is None:
                per_color[c] = (-1, None, cs.tc_routing.label.get(v, 0))
                continue
            target_frag = best[1]
            a_vc = min(a for a in anchor_list if cs.fragment_of[a] == target_frag)
            block = _block_for(g, net, cs, tree_routing.label, target_frag, my_frag)
            per_color[c] = (a_vc, block, cs.tc_routing.label[v])
        lbits = wid + wid + width_for(n + 1)
        lbits += len(per_color) * (wc + wid + wblock + wid)
        vertex_labels.append(
            RoutingVertexLabel(
                vertex=v,
                tree_label=tree_routing.label[v],
                anchor=anchor_of[v],
                per_color=per_color,
                bits=lbits,
            )
        )

    color_labels = []
    for c in range(g.C):
        blocks = {}
        cs = structures.get(c)
        for a in anchor_list:
            if cs is None:
                blocks[a] = None
            else:
                blocks[a] = _block_for(
                    g, net, cs, tree_routing.label,
                    cs.fragment_of[root], cs.fragment_of[a],
                )
        cbits = wc + width_for(len(anchor_list) + 1) + len(anchor_list) * wblock
        color_labels.append(RoutingColorLabel(c, blocks, cbits))
    return tuple(tables), tuple(vertex_labels), tuple(color_labels)


# -- simulation --------------------------------------------------------------------


@dataclass(frozen=True)
class Hop:
    src: int
    port: int
    dst: int
    edge: int
    color: int


@dataclass(frozen=True)
class RouteResult:
    source: int
    target: int
    avoided_color: int
    trace: tuple[Hop, ...]
    header: MessageHeader

    @property
    def hops(self) -> int:
        return len(self.trace)


def _tree_port(table: TreeNodeTable, target_label: int) -> int:
    port = table.next_port_for(target_label)
    if port is None:
        raise RoutingBugError("tree routing asked to move while already there")
    return port


def expected_first_recovery_block(
    scheme: RoutingScheme, v: int, c: int, a_star: int
) -> FirstRecEdgeBlock | None:
    """The e_i block invariant (I) demands while sitting in v's fragment."""
    cs = scheme.structures.get(c)
    if cs is None:
        return None
    return _block_for(
        scheme.graph, scheme.net, cs, scheme.tree_routing.label,
        cs.fragment_of[v], cs.fragment_of[a_star],
    )


def make_header(scheme: RoutingScheme, t: int, c: int) -> MessageHeader:
    """Initialization at the source from L(t) and L(c) alone."""
    lt = scheme.vertex_labels[t]
    lcol = scheme.color_labels[c]
    if c in lt.per_color:
        a_star, target_block, tc_label = lt.per_color[c]
        if a_star < 0:
            raise UnreachableError("no anchor fragment reachable once the color fails")
        return MessageHeader(
            color=c,
            a_star=a_star,
            root_block=lcol.blocks.get(a_star),
            target_tree_label=lt.tree_label,
            target_on_path=True,
            target_block=target_block,
            target_tc_label=tc_label,
        )
    return MessageHeader(
        color=c,
        a_star=lt.anchor,
        root_block=lcol.blocks.get(lt.anchor),
        target_tree_label=lt.tree_label,
        target_on_path=False,
        target_block=None,
        target_tc_label=None,
    )


def _decide_port(scheme: RoutingScheme, v: int, h: MessageHeader) -> int:
    tree_table = scheme.tree_routing.tables[v]
    if h.up is not None:
        if h.up:
            at_root = tree_table.parent_port is None
            table = scheme.tables[v]
            if not at_root and table.parent_color != h.color:
                return tree_table.parent_port  # climb inside the fragment
            block = h.root_block if at_root else table.blocks.get(h.a_star)
            if block is None:
                # already in the target fragment: switch to the second phase
                h.up = None
                h.next_block = h.target_block
            else:
                h.next_block = block
                h.up = False
        if h.up is False:
            nb = h.next_block
            if nb is None:
                raise RoutingBugError("descending without a recovery edge")
            if tree_table.pre != nb.x_tree_label:
                return _tree_port(tree_table, nb.x_tree_label)
            if nb.into_target_fragment:
                h.up = None
                h.next_block = h.target_block
            else:
                h.up = True
            return nb.port
    # second phase
    if h.next_block is not None:
        nb = h.next_block
        if tree_table.pre != nb.x_tree_label:
            return _tree_port(tree_table, nb.x_tree_label)
        h.next_block = None
        return nb.port
    if h.target_on_path and h.target_block is not None:
        tc_table = scheme.tables[v].tc_tables.get(h.color)
        if tc_table is None:
            raise RoutingBugError("recovery-tree table missing on the final approach")
        assert h.target_tc_label is not None
        return _tree_port(tc_table, h.target_tc_label)
    return _tree_port(tree_table, h.target_tree_label)


def route(
    scheme: RoutingScheme,
    s: int,
    t: int,
    c: int,
    on_state=None,
) -> RouteResult:
    """Simulate the hop-by-hop delivery of one message avoiding color c.

    ``on_state(vertex, header)`` fires at the source and after every hop, for
    invariant checking.  Raises UnreachableError when the one-fault labels say
    the endpoints are separated, RoutingBugError on internal contract breaks.
    """
    g = scheme.graph
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise GraphError("vertex out of range")
    if not 0 <= c < g.C:
        raise GraphError(f"color {c} outside palette of size {g.C}")
    if s == t:
        raise GraphError("source and target must differ")
    conn = scheme.connectivity
    if not pair_connected(
        conn.vertex_labels[s], conn.vertex_labels[t], conn.color_labels[c]
    ):
        raise UnreachableError(f"{s} and {t} are separated once color {c} fails")

    header = make_header(scheme, t, c)
    trace: list[Hop] = []
    budget = g.n * g.n
    current = s
    if on_state is not None:
        on_state(current, header)
    while current != t:
        if len(trace) >= budget:
            raise RoutingBugError("hop budget exceeded")
        port = _decide_port(scheme, current, header)
        nxt, eid = scheme.net.deliver(current, port)
        color = g.edge_color(eid)
        if color == c:
            raise RoutingBugError("routed over a forbidden edge")
        trace.append(Hop(current, port, nxt, eid, color))
        current = nxt
        if on_state is not None:
            on_state(current, header)
    return RouteResult(s, t, c, tuple(trace), header)


def header_bit_sizes(scheme: RoutingScheme, header: MessageHeader) -> tuple[int, int]:
    """(permanent, mutable) canonical header sizes in bits."""
    wid = id_width(max(scheme.graph.n, 2))
    wc = width_for(max(scheme.graph.C, 2))
    wport = width_for(max(scheme.net.max_ports(), 2))
    return header.permanent_bits(wc, wid, wport), header.mutable_bits(wid, wport)
