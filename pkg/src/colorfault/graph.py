"""Colored multigraphs, fault views, and connectivity primitives.

A :class:`ColoredGraph` is an undirected multigraph whose edges (edge mode) or
vertices (vertex mode) carry a color from a palette ``0..C-1``.  A fault set is
a set of colors; removing it deletes every element of those colors.  Everything
here is deterministic: edges are scanned in increasing edge id, BFS explores
neighbors in increasing ``(neighbor id, edge id)`` order, and component ids are
minimum vertex ids.

Graphs are immutable after construction; all queries are pure reads and safe to
share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

EDGE = "edge"
VERTEX = "vertex"


class GraphError(ValueError):
    """Malformed graph construction or text input."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidFaultSetError(ValueError):
    """Fault set mentions a color id outside the palette."""


class RemovedVertexError(ValueError):
    """Vertex-mode query on a vertex whose own color is faulted."""


@dataclass(frozen=True)
class ColoredGraph:
    """Immutable colored multigraph.

    ``edges[i]`` is the endpoint pair of edge id ``i``.  Exactly one of
    ``edge_colors`` / ``vertex_colors`` is set, matching ``mode``.  Parallel
    edges and self-loops are permitted; self-loops never affect connectivity.
    """

    n: int
    mode: str
    edges: tuple[tuple[int, int], ...]
    C: int
    edge_colors: tuple[int, ...] | None = None
    vertex_colors: tuple[int, ...] | None = None
    _adj: tuple[tuple[tuple[int, int], ...], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be >= 0")
        if self.C < 0:
            raise GraphError("palette size must be >= 0")
        if self.mode not in (EDGE, VERTEX):
            raise GraphError(f"unknown mode {self.mode!r}")
        if self.mode == EDGE:
            if self.vertex_colors is not None:
                raise GraphError("edge mode must not carry vertex colors")
            if self.edge_colors is None or len(self.edge_colors) != len(self.edges):
                raise GraphError("edge mode needs one color per edge")
            for c in self.edge_colors:
                if not 0 <= c < self.C:
                    raise GraphError(f"edge color {c} outside palette of size {self.C}")
        else:
            if self.edge_colors is not None:
                raise GraphError("vertex mode must not carry edge colors")
            if self.vertex_colors is None or len(self.vertex_colors) != self.n:
                raise GraphError("vertex mode needs one color per vertex")
            for c in self.vertex_colors:
                if not 0 <= c < self.C:
                    raise GraphError(f"vertex color {c} outside palette of size {self.C}")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge endpoint out of range: ({u}, {v})")
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            if u != v:
                adj[v].append((u, eid))
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    # -- accessors ----------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_color(self, eid: int) -> int:
        assert self.edge_colors is not None
        return self.edge_colors[eid]

    def vertex_color(self, v: int) -> int:
        assert self.vertex_colors is not None
        return self.vertex_colors[v]

    def adjacency(self, v: int) -> tuple[tuple[int, int], ...]:
        """Neighbors of ``v`` as (neighbor, edge id), sorted."""
        return self._adj[v]

    def color_classes(self) -> list[list[int]]:
        """Edge ids per color (edge mode) or vertex ids per color (vertex mode)."""
        classes: list[list[int]] = [[] for _ in range(self.C)]
        if self.mode == EDGE:
            for eid, c in enumerate(self.edge_colors or ()):
                classes[c].append(eid)
        else:
            for v, c in enumerate(self.vertex_colors or ()):
                classes[c].append(v)
        return classes

    def check_fault_set(self, colors: Iterable[int]) -> frozenset[int]:
        F = frozenset(colors)
        for c in F:
            if not 0 <= c < self.C:
                raise InvalidFaultSetError(f"color {c} outside palette of size {self.C}")
        return F

    def view(self, faults: Iterable[int] = ()) -> "GraphView":
        return remove_colors(self, faults)


@dataclass(frozen=True)
class GraphView:
    """``graph`` minus a fault set; vertex ids are preserved.

    In vertex mode, removed vertices stay in the id space but are non-members:
    they have no surviving edges and vertex-specific queries on them error.
    """

    graph: ColoredGraph
    faults: frozenset[int]

    @property
    def n(self) -> int:
        return self.graph.n

    def vertex_present(self, v: int) -> bool:
        g = self.graph
        if g.mode == VERTEX and g.vertex_colors is not None:
            return g.vertex_colors[v] not in self.faults
        return True

    def edge_present(self, eid: int) -> bool:
        g = self.graph
        if g.mode == EDGE:
            return g.edge_color(eid) not in self.faults
        u, v = g.edges[eid]
        return self.vertex_present(u) and self.vertex_present(v)

    def surviving_edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (edge id, u, v) in increasing edge id."""
        for eid, (u, v) in enumerate(self.graph.edges):
            if self.edge_present(eid):
                yield eid, u, v

    def adjacency(self, v: int) -> list[tuple[int, int]]:
        return [(w, eid) for (w, eid) in self.graph.adjacency(v) if self.edge_present(eid)]


def as_view(g: ColoredGraph | GraphView) -> GraphView:
    if isinstance(g, GraphView):
        return g
    return GraphView(g, frozenset())


def remove_colors(g: ColoredGraph, faults: Iterable[int]) -> GraphView:
    """View of ``g`` with every element colored by ``faults`` removed."""
    return GraphView(g, g.check_fault_set(faults))


# -- union-find -----------------------------------------------------------


class UnionFind:
    """Path-compressing union-find tracking the minimum member id per set."""

    __slots__ = ("parent", "size", "min_id")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.min_id = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        if self.min_id[b] < self.min_id[a]:
            self.min_id[a] = self.min_id[b]
        return True

    def component_min(self, x: int) -> int:
        return self.min_id[self.find(x)]

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


class RollbackUnionFind:
    """Union by size without path compression, with an undo stack.

    Used by the divide-and-conquer sweep over the color palette; rollback must
    restore both structure and per-set minima exactly.
    """

    __slots__ = ("parent", "size", "min_id", "trail")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.min_id = list(range(n))
        self.trail: list[tuple[int, int, int]] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.trail.append((b, a, self.min_id[a]))
        self.parent[b] = a
        self.size[a] += self.size[b]
        if self.min_id[b] < self.min_id[a]:
            self.min_id[a] = self.min_id[b]

    def checkpoint(self) -> int:
        return len(self.trail)

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            child, root, old_min = self.trail.pop()
            self.parent[child] = child
            self.size[root] -= self.size[child]
            self.min_id[root] = old_min

    def component_min(self, x: int) -> int:
        return self.min_id[self.find(x)]


# -- connectivity primitives ------------------------------------------------


def components(gv: ColoredGraph | GraphView) -> list[int | None]:
    """Component id (minimum member id) per vertex; None for removed vertices."""
    gv = as_view(gv)
    uf = UnionFind(gv.n)
    for eid, u, v in gv.surviving_edges():
        if u != v:
            uf.union(u, v)
    return [uf.component_min(v) if gv.vertex_present(v) else None for v in range(gv.n)]


def cid(g: ColoredGraph, v: int, faults: Iterable[int] = ()) -> int:
    """Minimum vertex id connected to ``v`` in ``g`` minus ``faults``."""
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range")
    gv = remove_colors(g, faults)
    if not gv.vertex_present(v):
        raise RemovedVertexError(f"vertex {v} has a faulted color")
    best = v
    seen = bytearray(g.n)
    seen[v] = 1
    stack = [v]
    while stack:
        x = stack.pop()
        if x < best:
            best = x
        for w, _eid in gv.adjacency(x):
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    return best


def connected(g: ColoredGraph, u: int, v: int, faults: Iterable[int] = ()) -> bool:
    """BFS-based reachability of ``u`` and ``v`` in ``g`` minus ``faults``."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError("vertex out of range")
    gv = remove_colors(g, faults)
    for x in (u, v):
        if not gv.vertex_present(x):
            raise RemovedVertexError(f"vertex {x} has a faulted color")
    if u == v:
        return True
    seen = bytearray(g.n)
    seen[u] = 1
    stack = [u]
    while stack:
        x = stack.pop()
        for w, _eid in gv.adjacency(x):
            if w == v:
                return True
            if not seen[w]:
                seen[w] = 1
                stack.append(w)
    return False


def spanning_forest(gv: ColoredGraph | GraphView) -> tuple[int, ...]:
    """Maximal forest as a sorted tuple of edge ids (increasing-id scan)."""
    gv = as_view(gv)
    uf = UnionFind(gv.n)
    forest: list[int] = []
    for eid, u, v in gv.surviving_edges():
        if u != v and uf.union(u, v):
            forest.append(eid)
    return tuple(forest)


@dataclass(frozen=True)
class BfsTree:
    root: int
    parent: tuple[int | None, ...]
    parent_edge: tuple[int | None, ...]
    depth: tuple[int, ...]  # -1 for unreachable or removed vertices

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])  # type: ignore[arg-type]
        return path


def bfs_tree(gv: ColoredGraph | GraphView, root: int) -> BfsTree:
    """BFS tree of ``root``'s component; neighbors in (id, edge id) order."""
    gv = as_view(gv)
    if not 0 <= root < gv.n:
        raise GraphError(f"root {root} out of range")
    if not gv.vertex_present(root):
        raise RemovedVertexError(f"root {root} has a faulted color")
    parent: list[int | None] = [None] * gv.n
    parent_edge: list[int | None] = [None] * gv.n
    depth = [-1] * gv.n
    depth[root] = 0
    queue = [root]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        for w, eid in gv.adjacency(x):
            if depth[w] < 0:
                depth[w] = depth[x] + 1
                parent[w] = x
                parent_edge[w] = eid
                queue.append(w)
    return BfsTree(root, tuple(parent), tuple(parent_edge), tuple(depth))


# -- per-color fault sweep ---------------------------------------------------


def _sweep_single_color_faults(g: ColoredGraph, at_leaf) -> None:
    """Visit every single-color fault with a shared rollback union-find.

    Divide and conquer over the palette: each edge is inserted O(log C) times
    instead of rebuilding C partitions from scratch.  ``at_leaf(c, uf, dead)``
    runs with the union-find holding exactly the partition of ``g - c``; in
    vertex mode ``dead`` is the set of vertices removed by color c.
    """
    if g.C == 0:
        return
    uf = RollbackUnionFind(g.n)
    # exclusion colors per edge: the colors whose failure kills it (1 in edge
    # mode, <=2 in vertex mode)
    pending: list[tuple[int, int, tuple[int, ...]]] = []
    for eid, (u, v) in enumerate(g.edges):
        if u == v:
            continue
        if g.mode == EDGE:
            excl: tuple[int, ...] = (g.edge_color(eid),)
        else:
            cu, cv = g.vertex_color(u), g.vertex_color(v)
            excl = (cu,) if cu == cv else (cu, cv)
        pending.append((u, v, excl))

    removed_by_color: list[set[int]] = [set() for _ in range(g.C)]
    if g.mode == VERTEX:
        for v, c in enumerate(g.vertex_colors or ()):
            removed_by_color[c].add(v)

    def solve(lo: int, hi: int, edges: list[tuple[int, int, tuple[int, ...]]]) -> None:
        if hi - lo == 1:
            at_leaf(lo, uf, removed_by_color[lo])
            return
        mid = (lo + hi) // 2
        for side_lo, side_hi in ((lo, mid), (mid, hi)):
            mark = uf.checkpoint()
            dirty: list[tuple[int, int, tuple[int, ...]]] = []
            for u, v, excl in edges:
                if any(side_lo <= c < side_hi for c in excl):
                    dirty.append((u, v, excl))
                else:
                    uf.union(u, v)
            solve(side_lo, side_hi, dirty)
            uf.rollback(mark)

    solve(0, g.C, pending)


def components_per_color(g: ColoredGraph) -> list[list[int | None]]:
    """For every color c, the component-id array of ``g - c``.

    In vertex mode, vertices of the failing color come out as None.
    """
    out: list[list[int | None]] = [[] for _ in range(g.C)]

    def at_leaf(c: int, uf: RollbackUnionFind, dead: set[int]) -> None:
        out[c] = [None if v in dead else uf.component_min(v) for v in range(g.n)]

    _sweep_single_color_faults(g, at_leaf)
    return out


def cids_for_color_queries(
    g: ColoredGraph, wanted: dict[int, Iterable[int]]
) -> dict[int, dict[int, int | None]]:
    """cid(v, g - c) for selected (color, vertex) pairs only.

    ``wanted`` maps a color to the vertices whose cid under that single fault
    is needed; far cheaper than full per-color arrays when the palette is big.
    """
    ask = {c: sorted(set(vs)) for c, vs in wanted.items()}
    out: dict[int, dict[int, int | None]] = {c: {} for c in ask}

    def at_leaf(c: int, uf: RollbackUnionFind, dead: set[int]) -> None:
        if c not in ask:
            return
        res = out[c]
        for v in ask[c]:
            res[v] = None if v in dead else uf.component_min(v)

    _sweep_single_color_faults(g, at_leaf)
    return out


# -- mode reduction ----------------------------------------------------------


def reduce_between_modes(g: ColoredGraph) -> ColoredGraph:
    """Subdivide every edge to swap coloring modes.

    Edge mode -> vertex mode: edge e={u,v} becomes u - x_e - v with x_e carrying
    e's color and all original vertices carrying a fresh never-failing color C
    (so the palette grows to C+1).  Vertex mode -> edge mode: each half-edge
    gets the color of its incident original vertex; the palette is unchanged.
    Either way the output has n+m vertices and 2m edges, and connectivity of
    original vertices under any fault set over the original palette agrees with
    the input.
    """
    n, m = g.n, g.m
    new_edges: list[tuple[int, int]] = []
    if g.mode == EDGE:
        vcolors = [g.C] * n + [0] * m
        for eid, (u, v) in enumerate(g.edges):
            x = n + eid
            vcolors[x] = g.edge_color(eid)
            new_edges.append((u, x))
            new_edges.append((x, v))
        return ColoredGraph(
            n=n + m, mode=VERTEX, edges=tuple(new_edges), C=g.C + 1,
            vertex_colors=tuple(vcolors),
        )
    ecolors: list[int] = []
    for eid, (u, v) in enumerate(g.edges):
        x = n + eid
        new_edges.append((u, x))
        ecolors.append(g.vertex_color(u))
        new_edges.append((x, v))
        ecolors.append(g.vertex_color(v))
    return ColoredGraph(
        n=n + m, mode=EDGE, edges=tuple(new_edges), C=max(g.C, 1),
        edge_colors=tuple(ecolors),
    )


# -- text format --------------------------------------------------------------
#
#   line 1:  ccg 1 <mode> <n> <m> <C>
#   edge mode:   m lines "u v c"
#   vertex mode: n lines "c", then m lines "u v"
#
# '#' starts a comment; blank lines are ignored; ids are 0-based decimal.


def parse_graph(text: str) -> ColoredGraph:
    logical: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            logical.append((lineno, body.split()))

    if not logical:
        raise ParseError("missing header", 1)
    hline, htok = logical[0]
    if len(htok) != 6 or htok[0] != "ccg" or htok[1] != "1":
        raise ParseError("header must be 'ccg 1 <mode> <n> <m> <C>'", hline)
    mode = htok[2]
    if mode not in (EDGE, VERTEX):
        raise ParseError(f"unknown mode {mode!r}", hline)
    try:
        n, m, C = int(htok[3]), int(htok[4]), int(htok[5])
    except ValueError:
        raise ParseError("header counts must be integers", hline) from None
    if n < 0 or m < 0 or C < 0:
        raise ParseError("header counts must be non-negative", hline)

    body_lines = logical[1:]
    expected = m if mode == EDGE else n + m
    if len(body_lines) != expected:
        where = body_lines[-1][0] if body_lines else hline
        raise ParseError(f"expected {expected} data lines, found {len(body_lines)}", where)

    def as_int(tok: str, lineno: int, what: str, bound: int) -> int:
        try:
            value = int(tok)
        except ValueError:
            raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None
        if not 0 <= value < bound:
            raise ParseError(f"{what} {value} out of range [0, {bound})", lineno)
        return value

    try:
        if mode == EDGE:
            edges = []
            colors = []
            for lineno, tok in body_lines:
                if len(tok) != 3:
                    raise ParseError("edge line must be 'u v c'", lineno)
                u = as_int(tok[0], lineno, "vertex id", n)
                v = as_int(tok[1], lineno, "vertex id", n)
                edges.append((u, v))
                colors.append(as_int(tok[2], lineno, "color id", C))
            return ColoredGraph(n=n, mode=EDGE, edges=tuple(edges), C=C,
                                edge_colors=tuple(colors))
        vcolors = []
        for lineno, tok in body_lines[:n]:
            if len(tok) != 1:
                raise ParseError("vertex color line must be a single color id", lineno)
            vcolors.append(as_int(tok[0], lineno, "color id", C))
        edges = []
        for lineno, tok in body_lines[n:]:
            if len(tok) != 2:
                raise ParseError("edge line must be 'u v'", lineno)
            edges.append((as_int(tok[0], lineno, "vertex id", n),
                          as_int(tok[1], lineno, "vertex id", n)))
        return ColoredGraph(n=n, mode=VERTEX, edges=tuple(edges), C=C,
                            vertex_colors=tuple(vcolors))
    except GraphError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), hline) from exc


def serialize_graph(g: ColoredGraph) -> str:
    lines = [f"ccg 1 {g.mode} {g.n} {g.m} {g.C}"]
    if g.mode == EDGE:
        for eid, (u, v) in enumerate(g.edges):
            lines.append(f"{u} {v} {g.edge_color(eid)}")
    else:
        lines.extend(str(c) for c in g.vertex_colors or ())
        lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def edge_graph(n: int, colored_edges: Sequence[tuple[int, int, int]], C: int | None = None) -> ColoredGraph:
    """Convenience constructor from (u, v, color) triples."""
    if C is None:
        C = max((c for _, _, c in colored_edges), default=-1) + 1
    return ColoredGraph(
        n=n, mode=EDGE,
        edges=tuple((u, v) for u, v, _ in colored_edges),
        edge_colors=tuple(c for _, _, c in colored_edges),
        C=C,
    )


def vertex_graph(colors: Sequence[int], edges: Sequence[tuple[int, int]], C: int | None = None) -> ColoredGraph:
    if C is None:
        C = max(colors, default=-1) + 1
    return ColoredGraph(
        n=len(colors), mode=VERTEX, edges=tuple(edges),
        vertex_colors=tuple(colors), C=C,
    )
