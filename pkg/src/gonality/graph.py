"""
Exact multigraphs, refinements and classical invariants.

A MultiGraph keeps every parallel edge and loop as a distinct, named edge,
because indexed morphisms assign an index to each of them. Values are
immutable; refinement operations return a new graph together with a
RefinementTrace recording where every new vertex and edge came from.

Invariants computed here: degree (loops count twice), genus, volume, the
Laplacian and its normalized similar form D⁻¹L, stability and the stable
model, edge connectivity (Stoer–Wagner on multiplicity weights) and exact
treewidth (branch and bound over elimination orderings).
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal, NamedTuple

import networkx as nx
import numpy as np

from gonality.config import ISOMORPHISM_MAX_VERTICES, TREEWIDTH_MAX_VERTICES
from gonality.errors import InvalidInputError, SizeCapError

OriginKind = Literal["vertex", "edge", "leaf"]


@dataclass(frozen=True)
class Edge:
    """An edge with its id and unordered endpoints; a loop has u == v."""

    id: str
    u: str
    v: str

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: str) -> str:
        """Return the endpoint opposite to x."""
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise InvalidInputError(f"Vertex {x} is not an endpoint of edge {self.id}")

    def ends(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


@dataclass(frozen=True)
class MultiGraph:
    """
    Finite multigraph with named vertices and named edges.

    Attributes
    ----------
    vertices : tuple[str, ...]
        Vertex ids in a fixed order.
    edges : tuple[Edge, ...]
        Edges in a fixed order; parallel edges are separate entries.

    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            dup = [v for v, n in Counter(self.vertices).items() if n > 1]
            raise InvalidInputError(f"Duplicate vertex ids: {dup}")
        seen: set[str] = set()
        known = set(self.vertices)
        for e in self.edges:
            if e.id in seen:
                raise InvalidInputError(f"Duplicate edge id: {e.id}")
            seen.add(e.id)
            if e.u not in known or e.v not in known:
                raise InvalidInputError(f"Edge {e.id} uses an undeclared vertex")

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[str, str]], vertices: Iterable[str] = ()
    ) -> "MultiGraph":
        """Build a graph with edge ids e1, e2, ... in the order given."""
        order: dict[str, None] = dict.fromkeys(vertices)
        edges = []
        for i, (u, v) in enumerate(pairs, start=1):
            order.setdefault(u)
            order.setdefault(v)
            edges.append(Edge(f"e{i}", u, v))
        return cls(tuple(order), tuple(edges))

    @cached_property
    def _edge_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.u].append(e)
            if not e.is_loop:
                inc[e.v].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    @cached_property
    def position(self) -> dict[str, int]:
        """Index of every vertex in the vertex order."""
        return {v: i for i, v in enumerate(self.vertices)}

    def edge(self, eid: str) -> Edge:
        try:
            return self._edge_by_id[eid]
        except KeyError:
            raise InvalidInputError(f"Unknown edge id: {eid}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self.position

    def incident(self, v: str) -> tuple[Edge, ...]:
        """Edges at v; a loop is listed once."""
        try:
            return self._incidence[v]
        except KeyError:
            raise InvalidInputError(f"Unknown vertex id: {v}") from None

    def neighbors(self, v: str) -> list[str]:
        """Distinct neighbours of v other than v, in vertex order."""
        nbrs = {e.other(v) for e in self.incident(v) if not e.is_loop}
        return sorted(nbrs, key=self.position.__getitem__)

    def multiplicity(self, u: str, v: str) -> int:
        """Number of edges joining u and v (loops at u when u == v)."""
        return sum(1 for e in self.incident(u) if e.other(u) == v)

    @property
    def has_loops(self) -> bool:
        return any(e.is_loop for e in self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        """Return a networkx MultiGraph keyed by edge id."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(e.u, e.v, key=e.id)
        return g

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        return bool(nx.is_connected(self.to_networkx()))

    def require_connected(self) -> None:
        if not self.is_connected():
            raise InvalidInputError("Graph is not connected")

    def subgraph(self, edge_ids: Iterable[str]) -> "MultiGraph":
        """Subgraph spanned by the given edges (vertex order preserved)."""
        keep = set(edge_ids)
        edges = tuple(e for e in self.edges if e.id in keep)
        touched = {x for e in edges for x in (e.u, e.v)}
        return MultiGraph(tuple(v for v in self.vertices if v in touched), edges)

    def components(self) -> list["MultiGraph"]:
        """Connected components in order of their first vertex."""
        g = self.to_networkx()
        parts = sorted(
            nx.connected_components(g), key=lambda c: min(self.position[v] for v in c)
        )
        out = []
        for part in parts:
            edges = tuple(e for e in self.edges if e.u in part)
            out.append(MultiGraph(tuple(v for v in self.vertices if v in part), edges))
        return out


class Origin(NamedTuple):
    """Where a child vertex comes from: a parent vertex, a parent edge, or a leaf."""

    kind: OriginKind
    ref: str | None = None


LEAF = Origin("leaf")


@dataclass(frozen=True, eq=False)
class RefinementTrace:
    """
    Record of how `child` refines `parent`.

    `edge_origin` maps every child edge to the parent edge it subdivides, or
    None for leaf material. `vertex_origin` maps every child vertex to an
    Origin: the parent vertex it is, the parent edge whose interior it lies
    on, or a leaf.
    """

    parent: MultiGraph
    child: MultiGraph
    edge_origin: Mapping[str, str | None]
    vertex_origin: Mapping[str, Origin]

    @classmethod
    def identity(cls, graph: MultiGraph) -> "RefinementTrace":
        return cls(
            graph,
            graph,
            {e.id: e.id for e in graph.edges},
            {v: Origin("vertex", v) for v in graph.vertices},
        )

    def then(self, after: "RefinementTrace") -> "RefinementTrace":
        """Compose with a trace whose parent is this trace's child."""
        if after.parent is not self.child and after.parent != self.child:
            raise InvalidInputError("Traces do not compose: graphs differ")
        edge_origin: dict[str, str | None] = {}
        for eid, mid in after.edge_origin.items():
            edge_origin[eid] = None if mid is None else self.edge_origin[mid]
        vertex_origin: dict[str, Origin] = {}
        for v, o in after.vertex_origin.items():
            if o.kind == "vertex":
                assert o.ref is not None
                vertex_origin[v] = self.vertex_origin[o.ref]
            elif o.kind == "edge":
                assert o.ref is not None
                src = self.edge_origin[o.ref]
                vertex_origin[v] = LEAF if src is None else Origin("edge", src)
            else:
                vertex_origin[v] = LEAF
        return RefinementTrace(self.parent, after.child, edge_origin, vertex_origin)

    @cached_property
    def image_of_vertex(self) -> dict[str, str]:
        """Parent vertex -> the child vertex that is it."""
        return {
            o.ref: v
            for v, o in self.vertex_origin.items()
            if o.kind == "vertex" and o.ref is not None
        }

    @property
    def original_vertices(self) -> frozenset[str]:
        return frozenset(self.image_of_vertex.values())

    def chain(self, parent_edge: str) -> tuple[list[str], list[str]]:
        """
        Return the restricted refinement of a parent edge as a path.

        The path runs from the image of the edge's first endpoint to the
        image of its second; the result is (vertices, edges) along it.
        """
        pe = self.parent.edge(parent_edge)
        pieces = [e for e in self.child.edges if self.edge_origin[e.id] == pe.id]
        if not pieces:
            raise InvalidInputError(f"Trace has no edges over {parent_edge}")
        start = self.image_of_vertex[pe.u]
        verts, path = [start], []
        unused = {e.id: e for e in pieces}
        current = start
        while unused:
            step = next((e for e in unused.values() if current in (e.u, e.v)), None)
            if step is None:
                raise InvalidInputError(f"Refinement of {parent_edge} is not a path")
            del unused[step.id]
            current = step.other(current)
            path.append(step.id)
            verts.append(current)
        if current != self.image_of_vertex[pe.v]:
            raise InvalidInputError(f"Refinement of {parent_edge} ends off its endpoint")
        return verts, path


class GraphBuilder:
    """Accumulate vertices and edges with fresh names and trace origins."""

    def __init__(self, base: MultiGraph | None = None) -> None:
        self.vertices: list[str] = []
        self.edges: list[Edge] = []
        self.vertex_origin: dict[str, Origin] = {}
        self.edge_origin: dict[str, str | None] = {}
        self._vnames: set[str] = set()
        self._enames: set[str] = set()
        if base is not None:
            for v in base.vertices:
                self.add_vertex(v, Origin("vertex", v))
            for e in base.edges:
                self.add_edge(e.u, e.v, e.id, e.id)

    @staticmethod
    def _fresh(hint: str, used: set[str]) -> str:
        name, k = hint, 1
        while name in used:
            k += 1
            name = f"{hint}~{k}"
        used.add(name)
        return name

    def add_vertex(self, hint: str, origin: Origin = LEAF) -> str:
        name = self._fresh(hint, self._vnames)
        self.vertices.append(name)
        self.vertex_origin[name] = origin
        return name

    def add_edge(self, u: str, v: str, hint: str, origin: str | None = None) -> str:
        name = self._fresh(hint, self._enames)
        self.edges.append(Edge(name, u, v))
        self.edge_origin[name] = origin
        return name

    def graft(
        self, anchor: str, tree: MultiGraph, root: str, hint: str
    ) -> tuple[dict[str, str], dict[str, str]]:
        """
        Copy `tree` hanging from `anchor`, breadth first from `root`.

        Returns the maps from tree vertices and tree edges to their copies;
        the root maps to the anchor.
        """
        vcopy = {root: anchor}
        ecopy: dict[str, str] = {}
        frontier = [root]
        while frontier:
            nxt = []
            for x in frontier:
                for e in tree.incident(x):
                    y = e.other(x)
                    if y in vcopy:
                        continue
                    vcopy[y] = self.add_vertex(f"{hint}+{y}")
                    ecopy[e.id] = self.add_edge(vcopy[x], vcopy[y], f"{hint}+{e.id}")
                    nxt.append(y)
            frontier = nxt
        return vcopy, ecopy

    def graph(self) -> MultiGraph:
        return MultiGraph(tuple(self.vertices), tuple(self.edges))

    def trace(self, parent: MultiGraph) -> RefinementTrace:
        return RefinementTrace(
            parent, self.graph(), dict(self.edge_origin), dict(self.vertex_origin)
        )


# --- Classical invariants -------------------------------------------------


def degree(graph: MultiGraph, v: str) -> int:
    """Number of edges at v, loops counted twice."""
    return sum(2 if e.is_loop else 1 for e in graph.incident(v))


def max_degree(graph: MultiGraph) -> int:
    return max((degree(graph, v) for v in graph.vertices), default=0)


def genus(graph: MultiGraph) -> int:
    """First Betti number |E| - |V| + 1 of a connected graph."""
    return len(graph.edges) - len(graph.vertices) + 1


def volume(graph: MultiGraph, subset: Iterable[str] | None = None) -> int:
    """Sum of degrees over `subset` (all vertices when None)."""
    vs = graph.vertices if subset is None else list(subset)
    return sum(degree(graph, v) for v in vs)


def is_simple(graph: MultiGraph) -> bool:
    pairs = Counter(e.ends() for e in graph.edges)
    return not graph.has_loops and all(n == 1 for n in pairs.values())


def is_complete(graph: MultiGraph) -> bool:
    n = len(graph.vertices)
    return is_simple(graph) and len(graph.edges) == n * (n - 1) // 2


def is_tree(graph: MultiGraph) -> bool:
    return graph.is_connected() and genus(graph) == 0


def laplacian(graph: MultiGraph) -> np.ndarray:
    """Integer Laplacian D - A; loops cancel out, so rows sum to zero."""
    n = len(graph.vertices)
    pos = graph.position
    lap = np.zeros((n, n), dtype=np.int64)
    for e in graph.edges:
        if e.is_loop:
            continue
        i, j = pos[e.u], pos[e.v]
        lap[i, i] += 1
        lap[j, j] += 1
        lap[i, j] -= 1
        lap[j, i] -= 1
    return lap


def normalized_laplacian(graph: MultiGraph) -> np.ndarray:
    """
    Exact rational D⁻¹L, similar to D^{-1/2} L D^{-1/2}.

    Returns an object array of Fractions.
    """
    degrees = [degree(graph, v) for v in graph.vertices]
    if any(d == 0 for d in degrees):
        raise InvalidInputError("Normalized Laplacian needs a graph without isolated vertices")
    lap = laplacian(graph)
    n = len(degrees)
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = Fraction(int(lap[i, j]), degrees[i])
    return out


def is_stable(graph: MultiGraph) -> bool:
    """Every vertex has degree at least 3."""
    return all(degree(graph, v) >= 3 for v in graph.vertices)


def edge_connectivity(graph: MultiGraph) -> int:
    """Global minimum cut, parallel edges counted, via Stoer–Wagner."""
    if len(graph.vertices) < 2:
        raise InvalidInputError("Edge connectivity needs at least two vertices")
    graph.require_connected()
    weighted = nx.Graph()
    weighted.add_nodes_from(graph.vertices)
    for e in graph.edges:
        if e.is_loop:
            continue
        if weighted.has_edge(e.u, e.v):
            weighted[e.u][e.v]["weight"] += 1
        else:
            weighted.add_edge(e.u, e.v, weight=1)
    cut_value, _ = nx.stoer_wagner(weighted)
    return int(cut_value)


# --- Refinements ----------------------------------------------------------


def subdivide_edges(
    graph: MultiGraph, counts: Mapping[str, int]
) -> tuple[MultiGraph, RefinementTrace]:
    """Subdivide edge e `counts[e]` times; new points are named `<e>.<i>`."""
    for eid, k in counts.items():
        graph.edge(eid)
        if k < 0:
            raise InvalidInputError(f"Negative subdivision count for {eid}")
    builder = GraphBuilder()
    for v in graph.vertices:
        builder.add_vertex(v, Origin("vertex", v))
    for e in graph.edges:
        k = counts.get(e.id, 0)
        if k == 0:
            builder.add_edge(e.u, e.v, e.id, e.id)
            continue
        points = [builder.add_vertex(f"{e.id}.{i}", Origin("edge", e.id)) for i in range(1, k + 1)]
        path = [e.u, *points, e.v]
        for i in range(k + 1):
            builder.add_edge(path[i], path[i + 1], f"{e.id}/{i + 1}", e.id)
    return builder.graph(), builder.trace(graph)


def subdivide_edge(graph: MultiGraph, eid: str) -> tuple[MultiGraph, RefinementTrace]:
    """Subdivide one edge once; a loop becomes two parallel edges."""
    return subdivide_edges(graph, {eid: 1})


def graft(
    graph: MultiGraph, anchor: str, tree: MultiGraph, root: str, hint: str | None = None
) -> tuple[MultiGraph, RefinementTrace, dict[str, str], dict[str, str]]:
    """
    Attach a copy of a tree at `anchor`, identifying its `root` with the anchor.

    Returns the new graph, its trace, and the maps from tree vertices and
    tree edges to their copies.
    """
    graph.incident(anchor)
    if not is_tree(tree) or not tree.has_vertex(root):
        raise InvalidInputError("Only a tree containing its root can be grafted")
    builder = GraphBuilder(graph)
    vcopy, ecopy = builder.graft(anchor, tree, root, hint or anchor)
    return builder.graph(), builder.trace(graph), vcopy, ecopy


def add_leaf(graph: MultiGraph, v: str) -> tuple[MultiGraph, RefinementTrace]:
    """Attach a new vertex of degree one at v."""
    graph.incident(v)
    builder = GraphBuilder(graph)
    leaf = builder.add_vertex(f"{v}.leaf")
    builder.add_edge(v, leaf, f"{v}.leaf")
    return builder.graph(), builder.trace(graph)


def attach_path(
    graph: MultiGraph, v: str, length: int
) -> tuple[MultiGraph, RefinementTrace]:
    """Attach a leaf-path of `length` new vertices at v."""
    path = MultiGraph.from_pairs([(str(i), str(i + 1)) for i in range(length)], ["0"])
    g, trace, _, _ = graft(graph, v, path, "0", hint=f"{v}.path")
    return g, trace


def unrefine(graph: MultiGraph, origin: Iterable[str]) -> MultiGraph:
    """
    Recover the graph refined by `graph`, given its original vertices.

    Leaf material is pruned (non-original vertices of degree one, repeatedly)
    and every chain through non-original vertices of degree two is smoothed
    into a single edge named after its first piece.
    """
    keep = set(origin)
    for v in keep:
        graph.incident(v)
    alive_edges = {e.id: e for e in graph.edges}
    inc: dict[str, set[str]] = {v: set() for v in graph.vertices}
    for e in graph.edges:
        inc[e.u].add(e.id)
        inc[e.v].add(e.id)
    stack = [v for v in graph.vertices if v not in keep and _deg_of(inc[v], alive_edges, v) == 1]
    removed: set[str] = set()
    while stack:
        v = stack.pop()
        if v in removed or _deg_of(inc[v], alive_edges, v) != 1:
            continue
        removed.add(v)
        (eid,) = inc[v]
        e = alive_edges.pop(eid)
        w = e.other(v)
        inc[w].discard(eid)
        inc[v].clear()
        if w not in keep and _deg_of(inc[w], alive_edges, w) == 1:
            stack.append(w)

    result_edges: list[Edge] = []
    visited: set[str] = set()
    for e in graph.edges:
        if e.id not in alive_edges or e.id in visited:
            continue
        if e.u not in keep and e.v not in keep:
            continue
        start = e.u if e.u in keep else e.v
        visited.add(e.id)
        current, prev = e.other(start), e.id
        while current not in keep:
            nxt = [f for f in inc[current] if f != prev]
            if len(nxt) != 1:
                raise InvalidInputError(f"Vertex {current} is not on a subdivision chain")
            prev = nxt[0]
            visited.add(prev)
            current = alive_edges[prev].other(current)
        result_edges.append(Edge(e.id, start, current))
    leftovers = [eid for eid in alive_edges if eid not in visited]
    if leftovers:
        raise InvalidInputError(f"Edges {leftovers} are not attached to original vertices")
    return MultiGraph(tuple(v for v in graph.vertices if v in keep), tuple(result_edges))


def _deg_of(edge_ids: set[str], alive: Mapping[str, Edge], v: str) -> int:
    return sum(2 if alive[eid].is_loop else 1 for eid in edge_ids)


def stable_model(graph: MultiGraph) -> MultiGraph:
    """
    The unique stable graph that `graph` refines.

    Repeatedly delete vertices of degree one and smooth vertices of degree
    two; smoothing may create loops and parallel edges.
    """
    if genus(graph) < 2:
        raise InvalidInputError("The stable model needs genus at least 2")
    vertices = list(graph.vertices)
    edges = {e.id: e for e in graph.edges}
    changed = True
    while changed:
        changed = False
        for v in list(vertices):
            at_v = [e for e in edges.values() if v in (e.u, e.v)]
            d = sum(2 if e.is_loop else 1 for e in at_v)
            if d == 1:
                del edges[at_v[0].id]
            elif d == 2 and len(at_v) == 2:
                a, b = at_v[0].other(v), at_v[1].other(v)
                del edges[at_v[0].id], edges[at_v[1].id]
                edges[at_v[0].id] = Edge(at_v[0].id, a, b)
            else:
                continue
            vertices.remove(v)
            changed = True
    order = [e.id for e in graph.edges if e.id in edges]
    return MultiGraph(tuple(vertices), tuple(edges[eid] for eid in order))


def is_isomorphic(first: MultiGraph, second: MultiGraph) -> bool:
    """Isomorphism of multigraphs, multiplicities and loops included."""
    if max(len(first.vertices), len(second.vertices)) > ISOMORPHISM_MAX_VERTICES:
        raise SizeCapError(
            f"Isomorphism testing is capped at {ISOMORPHISM_MAX_VERTICES} vertices"
        )
    return bool(nx.is_isomorphic(first.to_networkx(), second.to_networkx()))


# --- Treewidth ------------------------------------------------------------

Adjacency = dict[str, frozenset[str]]


def underlying_simple(graph: MultiGraph) -> nx.Graph:
    """Simple graph on the same vertices; loops and repeated edges dropped."""
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from((e.u, e.v) for e in graph.edges if not e.is_loop)
    return g


def _eliminate(adj: Adjacency, v: str) -> Adjacency:
    nbrs = adj[v]
    out: dict[str, frozenset[str]] = {}
    for u, ns in adj.items():
        if u == v:
            continue
        if u in nbrs:
            out[u] = (ns | nbrs) - {u, v}
        else:
            out[u] = ns
    return out


def _fill_in(adj: Adjacency, v: str) -> int:
    nbrs = sorted(adj[v])
    return sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1 :] if b not in adj[a])


def _min_fill_width(adj: Adjacency) -> int:
    """Width of the min-fill elimination ordering (an upper bound)."""
    width = 0
    while adj:
        _, v = min((_fill_in(adj, u), u) for u in adj)
        width = max(width, len(adj[v]))
        adj = _eliminate(adj, v)
    return width


def _minor_min_width(adj: Adjacency) -> int:
    """Minor-min-width lower bound: contract a min-degree vertex into a neighbour."""
    g = {u: set(ns) for u, ns in adj.items()}
    bound = 0
    while g:
        d, u = min((len(ns), x) for x, ns in g.items())
        bound = max(bound, d)
        nbrs = g.pop(u)
        if not nbrs:
            continue
        _, w = min((len(g[x] & nbrs), x) for x in nbrs)
        for x in nbrs:
            g[x].discard(u)
            if x != w:
                g[x].add(w)
                g[w].add(x)
        g[w].discard(w)
    return bound


def _is_clique(adj: Adjacency, vs: Iterable[str]) -> bool:
    vs = list(vs)
    return all(b in adj[a] for i, a in enumerate(vs) for b in vs[i + 1 :])


def _simple_treewidth(adj: Adjacency) -> int:
    if not adj:
        return 0
    best = _min_fill_width(adj)
    root_lb = _minor_min_width(adj)
    if root_lb >= best:
        return best
    seen: dict[frozenset[str], int] = {}

    def search(adj: Adjacency, width: int) -> None:
        nonlocal best
        best = min(best, max(width, len(adj) - 1))
        if max(width, _minor_min_width(adj)) >= best:
            return
        key = frozenset(adj)
        if seen.get(key, best + 1) <= width:
            return
        seen[key] = width
        candidates = sorted(adj, key=lambda x: (len(adj[x]), x))
        for v in candidates:
            nbrs = adj[v]
            if _is_clique(adj, nbrs) or (
                len(nbrs) <= root_lb
                and any(_is_clique(adj, nbrs - {u}) for u in nbrs)
            ):
                candidates = [v]
                break
        for v in candidates:
            w = max(width, len(adj[v]))
            if w < best:
                search(_eliminate(adj, v), w)

    search(adj, 0)
    return best


def treewidth(graph: MultiGraph, cap: int = TREEWIDTH_MAX_VERTICES) -> int:
    """
    Exact treewidth by branch and bound over elimination orderings.

    Computed on the underlying simple graph; a bundle of parallel edges is a
    cycle of length two, so it raises the width to at least 2. Loops are
    ignored.
    """
    if len(graph.vertices) > cap:
        raise SizeCapError(f"Treewidth is capped at {cap} vertices, got {len(graph.vertices)}")
    simple = underlying_simple(graph)
    adj = {v: frozenset(simple[v]) for v in simple}
    width = _simple_treewidth(adj)
    pairs = Counter(e.ends() for e in graph.edges if not e.is_loop)
    if any(n > 1 for n in pairs.values()):
        width = max(width, 2)
    logging.debug("Treewidth of %d-vertex graph: %d", len(graph.vertices), width)
    return width


def branch(tree: MultiGraph, root: str, eid: str) -> MultiGraph:
    """
    The part of a tree hanging off `root` through edge `eid`.

    The result contains `root`, the edge, and everything beyond it.
    """
    first = tree.edge(eid)
    far = first.other(root)
    seen = {root, far}
    edges = [first.id]
    frontier = [far]
    while frontier:
        nxt = []
        for x in frontier:
            for e in tree.incident(x):
                y = e.other(x)
                if y in seen:
                    continue
                seen.add(y)
                edges.append(e.id)
                nxt.append(y)
        frontier = nxt
    return tree.subgraph(edges)


def is_path_from(tree: MultiGraph, root: str) -> bool:
    """True when `tree` is a path with `root` as one of its ends."""
    if len(tree.vertices) == 1:
        return True
    return degree(tree, root) == 1 and max_degree(tree) <= 2 and is_tree(tree)
