"""
Indexed graph morphisms: harmonicity, degree, refinement and pushforward.

An IndexedMorphism sends every domain vertex to a codomain vertex and every
domain edge either to a codomain edge with an index r ≥ 1, or (Caporaso
variant only) to a codomain vertex with index 0. It is harmonic when, at
every domain vertex v, the index sum over the edges at v lying over a
codomain edge t is the same number m(v) for every t at the image of v.

Refinement of morphisms follows the two standard moves: refining the
codomain tree (every domain edge over a subdivided codomain edge is
subdivided alongside, and attached codomain trees are copied with the
right index), and refining the domain (subdivide the codomain by a common
multiple of the segment counts, then refine the codomain).
"""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, NamedTuple

from gonality.errors import InvalidInputError, NotHarmonicError
from gonality.graph import (
    LEAF,
    GraphBuilder,
    MultiGraph,
    Origin,
    RefinementTrace,
    branch,
    is_tree,
)

Variant = Literal["finite", "caporaso"]


class EdgeImage(NamedTuple):
    """Image of a domain edge: a codomain edge with index ≥ 1, or a vertex with 0."""

    target: str
    index: int


@dataclass(frozen=True, eq=False)
class IndexedMorphism:
    """
    Vertex and edge maps with a per-edge index.

    `origin` is the set of vertices of the unrefined graph inside the domain,
    used to push the counting measure forward; None means all of them.
    """

    domain: MultiGraph
    codomain: MultiGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, EdgeImage]
    variant: Variant = "finite"
    origin: frozenset[str] | None = None

    def __post_init__(self) -> None:
        missing = [v for v in self.domain.vertices if v not in self.vmap]
        if missing:
            raise InvalidInputError(f"Vertices without image: {missing}")
        missing = [e.id for e in self.domain.edges if e.id not in self.emap]
        if missing:
            raise InvalidInputError(f"Edges without image: {missing}")
        for v, y in self.vmap.items():
            if not self.domain.has_vertex(v) or not self.codomain.has_vertex(y):
                raise InvalidInputError(f"Dangling vertex map {v} -> {y}")
        for e in self.domain.edges:
            self._check_edge(e.id, e.u, e.v)
        if self.origin is not None:
            unknown = [v for v in self.origin if not self.domain.has_vertex(v)]
            if unknown:
                raise InvalidInputError(f"Origin vertices not in domain: {unknown}")

    def _check_edge(self, eid: str, u: str, v: str) -> None:
        target, r = self.emap[eid]
        x, y = self.vmap[u], self.vmap[v]
        if r < 0:
            raise InvalidInputError(f"Negative index on {eid}")
        if r == 0:
            if self.variant == "finite":
                raise InvalidInputError(f"Finite morphism collapses edge {eid}")
            if not (x == y == target):
                raise InvalidInputError(f"Collapsed edge {eid} must map to {x}")
            return
        image = self.codomain.edge(target)
        if image.ends() != frozenset((x, y)):
            raise InvalidInputError(
                f"Edge {eid} maps to {target}, which does not join {x} and {y}"
            )

    def index(self, eid: str) -> int:
        return self.emap[eid].index

    def fiber(self, y: str) -> list[str]:
        return [v for v in self.domain.vertices if self.vmap[v] == y]

    @property
    def origin_vertices(self) -> frozenset[str]:
        return self.origin if self.origin is not None else frozenset(self.domain.vertices)


class Violation(NamedTuple):
    """A harmonicity failure at `vertex`; `edges` and `sums` show the mismatch."""

    vertex: str
    edges: tuple[str, ...]
    sums: tuple[int, ...]
    kind: str = "local"


@dataclass
class HarmonicityReport:
    """Outcome of verify(): multiplicities, degree and violations."""

    harmonic: bool
    m: dict[str, int]
    degree: int | None
    violations: list[Violation] = field(default_factory=list)
    empty_star: list[str] = field(default_factory=list)
    degenerate: list[str] = field(default_factory=list)

    @property
    def non_degenerate(self) -> bool:
        return not self.degenerate


def _local_sums(phi: IndexedMorphism, v: str) -> dict[str, int]:
    star = phi.codomain.incident(phi.vmap[v])
    sums = {t.id: 0 for t in star}
    for e in phi.domain.incident(v):
        target, r = phi.emap[e.id]
        if r > 0:
            sums[target] += r
    return sums


def verify(phi: IndexedMorphism) -> HarmonicityReport:
    """Check harmonicity at every vertex and constancy of the degree."""
    if phi.domain.has_loops or phi.codomain.has_loops:
        raise InvalidInputError("Harmonicity is only checked on loopless graphs")
    m: dict[str, int] = {}
    violations: list[Violation] = []
    empty_star: list[str] = []
    for v in phi.domain.vertices:
        sums = _local_sums(phi, v)
        if not sums:
            m[v] = 1
            empty_star.append(v)
            continue
        values = set(sums.values())
        m[v] = max(values)
        if len(values) > 1:
            hi = max(sums, key=sums.__getitem__)
            lo = min(sums, key=sums.__getitem__)
            violations.append(Violation(v, (hi, lo), (sums[hi], sums[lo])))
    degenerate = [v for v, mv in m.items() if mv == 0]

    degree = None
    if not violations:
        vertex_sums = {y: 0 for y in phi.codomain.vertices}
        for v in phi.domain.vertices:
            vertex_sums[phi.vmap[v]] += m[v]
        edge_sums = {t.id: 0 for t in phi.codomain.edges}
        for eid, (target, r) in phi.emap.items():
            if r > 0:
                edge_sums[target] += r
        totals = set(vertex_sums.values()) | set(edge_sums.values())
        if len(totals) == 1 and min(totals) > 0:
            degree = totals.pop()
        else:
            for y, s in vertex_sums.items():
                if s == 0:
                    violations.append(Violation(y, (), (0,), "not surjective"))
            if not any(vv.kind == "not surjective" for vv in violations):
                common = max(set(vertex_sums.values()), key=list(vertex_sums.values()).count)
                for y, s in vertex_sums.items():
                    if s != common:
                        violations.append(Violation(y, (), (s, common), "fiber"))
    if empty_star:
        logging.debug("Vertices over isolated codomain vertices get m=1: %s", empty_star)
    return HarmonicityReport(
        harmonic=not violations,
        m=m,
        degree=degree,
        violations=violations,
        empty_star=empty_star,
        degenerate=degenerate,
    )


def degree(phi: IndexedMorphism) -> int:
    """Degree of a harmonic morphism."""
    report = verify(phi)
    if not report.harmonic or report.degree is None:
        raise NotHarmonicError(f"Morphism is not harmonic: {report.violations[:3]}")
    return report.degree


def identity_morphism(graph: MultiGraph) -> IndexedMorphism:
    """Identity on a loopless graph, every index 1."""
    return IndexedMorphism(
        graph,
        graph,
        {v: v for v in graph.vertices},
        {e.id: EdgeImage(e.id, 1) for e in graph.edges},
    )


def pushforward(
    phi: IndexedMorphism, origin: Iterable[str] | None = None
) -> dict[str, Fraction]:
    """Push the uniform measure on the original vertices to the codomain."""
    support = frozenset(origin) if origin is not None else phi.origin_vertices
    if not support:
        raise InvalidInputError("Pushforward needs a nonempty set of original vertices")
    measure = {y: Fraction(0) for y in phi.codomain.vertices}
    for v in support:
        measure[phi.vmap[v]] += Fraction(1, len(support))
    return measure


def restrict(
    phi: IndexedMorphism, domain_edges: Iterable[str], codomain: MultiGraph
) -> IndexedMorphism:
    """Restrict to the subgraph spanned by `domain_edges`, over `codomain`."""
    sub = phi.domain.subgraph(domain_edges)
    origin = None
    if phi.origin is not None:
        origin = frozenset(v for v in phi.origin if sub.has_vertex(v))
    return IndexedMorphism(
        sub,
        codomain,
        {v: phi.vmap[v] for v in sub.vertices},
        {e.id: phi.emap[e.id] for e in sub.edges},
        phi.variant,
        origin,
    )


# --- Refinement of morphisms -----------------------------------------------


def _attached_trees(trace: RefinementTrace) -> dict[str, MultiGraph]:
    """Leaf material of a refined tree, grouped by attachment vertex."""
    child = trace.child
    leaf_edges = [e.id for e in child.edges if trace.edge_origin[e.id] is None]
    if not leaf_edges:
        return {}
    attached: dict[str, list[str]] = defaultdict(list)
    for comp in child.subgraph(leaf_edges).components():
        roots = [v for v in comp.vertices if trace.vertex_origin[v] != LEAF]
        if len(roots) != 1:
            raise InvalidInputError("Leaf material must hang from exactly one vertex")
        attached[roots[0]].extend(e.id for e in comp.edges)
    return {root: child.subgraph(edges) for root, edges in attached.items()}


def _require_finite_harmonic_to_tree(phi: IndexedMorphism) -> HarmonicityReport:
    if phi.variant != "finite":
        raise InvalidInputError("Refinement needs a finite morphism")
    if not is_tree(phi.codomain):
        raise InvalidInputError("Refinement needs a tree codomain")
    report = verify(phi)
    if not report.harmonic:
        raise NotHarmonicError(f"Morphism is not harmonic: {report.violations[:3]}")
    return report


def refine_codomain_traced(
    phi: IndexedMorphism, refined: MultiGraph, trace: RefinementTrace
) -> tuple[IndexedMorphism, RefinementTrace]:
    """refine_codomain, also returning the trace from φ's domain to the new one."""
    if trace.parent != phi.codomain or trace.child != refined:
        raise InvalidInputError("Trace does not refine the codomain into the given tree")
    m = _require_finite_harmonic_to_tree(phi).m
    attached = _attached_trees(trace)
    lift = trace.image_of_vertex

    builder = GraphBuilder()
    vmap: dict[str, str] = {}
    emap: dict[str, EdgeImage] = {}
    for v in phi.domain.vertices:
        builder.add_vertex(v, Origin("vertex", v))
        vmap[v] = lift[phi.vmap[v]]

    def hang(anchor: str, at: str, r: int) -> None:
        if at not in attached:
            return
        vcopy, ecopy = builder.graft(anchor, attached[at], at, anchor)
        for s, copy in vcopy.items():
            vmap[copy] = s
        for te, copy in ecopy.items():
            emap[copy] = EdgeImage(te, r)

    chains = {t.id: trace.chain(t.id) for t in phi.codomain.edges}
    for e in phi.domain.edges:
        target, r = phi.emap[e.id]
        t = phi.codomain.edge(target)
        points, pieces = chains[t.id]
        if phi.vmap[e.u] != t.u:
            points, pieces = points[::-1], pieces[::-1]
        inner = [
            builder.add_vertex(f"{e.id}.{i}", Origin("edge", e.id))
            for i in range(1, len(pieces))
        ]
        path = [e.u, *inner, e.v]
        for i, piece in enumerate(pieces):
            hint = e.id if len(pieces) == 1 else f"{e.id}/{i + 1}"
            eid = builder.add_edge(path[i], path[i + 1], hint, e.id)
            emap[eid] = EdgeImage(piece, r)
        for i, w in enumerate(inner, start=1):
            vmap[w] = points[i]
            hang(w, points[i], r)
    for v in phi.domain.vertices:
        hang(v, vmap[v], m[v])

    refined_phi = IndexedMorphism(
        builder.graph(), refined, vmap, emap, "finite", phi.origin
    )
    return refined_phi, builder.trace(phi.domain)


def refine_codomain(
    phi: IndexedMorphism, refined: MultiGraph, trace: RefinementTrace
) -> IndexedMorphism:
    """
    Lift φ: G → T to a refinement morphism onto a refinement T' of T.

    Every edge e of G is replaced by a copy of the path T'[φ(e)] with the
    same index; trees attached to T' along that path are copied with index
    r(e), and trees attached at a vertex φ(v) are copied at v with index
    m(v). The degree is unchanged.
    """
    return refine_codomain_traced(phi, refined, trace)[0]


def refine_domain(
    phi: IndexedMorphism, refined: MultiGraph, trace: RefinementTrace
) -> IndexedMorphism:
    """
    Lift φ: G → T to a refinement morphism whose domain refines H.

    Each codomain edge is subdivided into the least common multiple of the
    segment counts of its preimage edges in H; leaf trees of H are copied
    into the codomain at the matching points, and refine_codomain finishes.
    """
    if trace.parent != phi.domain or trace.child != refined:
        raise InvalidInputError("Trace does not refine the domain into the given graph")
    _require_finite_harmonic_to_tree(phi)
    tree = phi.codomain
    chains = {e.id: trace.chain(e.id) for e in phi.domain.edges}
    segments: dict[str, int] = {}
    for e in phi.domain.edges:
        t = phi.emap[e.id].target
        segments[t] = math.lcm(segments.get(t, 1), len(chains[e.id][1]))

    builder = GraphBuilder()
    for y in tree.vertices:
        builder.add_vertex(y, Origin("vertex", y))
    points_on: dict[str, list[str]] = {}
    for t in tree.edges:
        k = segments.get(t.id, 1)
        inner = [builder.add_vertex(f"{t.id}.{i}", Origin("edge", t.id)) for i in range(1, k)]
        path = [t.u, *inner, t.v]
        for i in range(k):
            builder.add_edge(path[i], path[i + 1], t.id if k == 1 else f"{t.id}/{i + 1}", t.id)
        points_on[t.id] = path

    leaves = _attached_trees(trace)
    for e in phi.domain.edges:
        t = tree.edge(phi.emap[e.id].target)
        verts = chains[e.id][0]
        if phi.vmap[e.u] != t.u:
            verts = verts[::-1]
        step = segments[t.id] // (len(verts) - 1)
        for j, w in enumerate(verts[1:-1], start=1):
            if w in leaves:
                builder.graft(points_on[t.id][j * step], leaves[w], w, f"{w}@")
    for v in phi.domain.vertices:
        w = trace.image_of_vertex[v]
        if w in leaves:
            builder.graft(phi.vmap[v], leaves[w], w, f"{w}@")

    refined_tree = builder.graph()
    logging.debug("refine_domain: codomain grows to %d vertices", len(refined_tree.vertices))
    return refine_codomain(phi, refined_tree, builder.trace(tree))


# --- Completion and the Caporaso construction --------------------------------


class Attachment(NamedTuple):
    """A copy of a codomain branch hung at `vertex` in direction `edge`."""

    vertex: str
    edge: str
    index: int
    branch: MultiGraph


def deficits(
    domain: MultiGraph,
    codomain: MultiGraph,
    vmap: Mapping[str, str],
    emap: Mapping[str, EdgeImage],
) -> tuple[dict[str, int], list[tuple[str, str, int]]]:
    """
    Multiplicities m(v) = max index sum, and every (v, t, m(v) - sum) shortfall.

    The codomain is a tree and every domain edge maps to a codomain edge.
    """
    m: dict[str, int] = {}
    short: list[tuple[str, str, int]] = []
    for v in domain.vertices:
        sums = {t.id: 0 for t in codomain.incident(vmap[v])}
        for e in domain.incident(v):
            target, r = emap[e.id]
            sums[target] += r
        m[v] = max(sums.values(), default=1) or 1
        short.extend((v, t, m[v] - s) for t, s in sums.items() if s < m[v])
    return m, short


def complete_deficits(
    domain: MultiGraph,
    codomain: MultiGraph,
    vmap: Mapping[str, str],
    emap: Mapping[str, EdgeImage],
    origin: frozenset[str] | None = None,
) -> tuple[IndexedMorphism, list[Attachment]]:
    """
    Make an edge-to-edge map to a tree harmonic by hanging branch copies.

    At a vertex v whose index sum toward a codomain edge t falls short of
    m(v) by k, a copy of the branch of the tree beyond t is attached at v
    with index k on every edge. The result is a finite harmonic morphism
    from a refinement of `domain`.
    """
    _, short = deficits(domain, codomain, vmap, emap)
    builder = GraphBuilder(domain)
    new_vmap = dict(vmap)
    new_emap = dict(emap)
    attachments: list[Attachment] = []
    branches: dict[tuple[str, str], MultiGraph] = {}
    for v, t, k in short:
        y = vmap[v]
        if (y, t) not in branches:
            branches[(y, t)] = branch(codomain, y, t)
        part = branches[(y, t)]
        vcopy, ecopy = builder.graft(v, part, y, f"{v}>{t}")
        for s, copy in vcopy.items():
            new_vmap[copy] = s
        for te, copy in ecopy.items():
            new_emap[copy] = EdgeImage(te, k)
        attachments.append(Attachment(v, t, k, part))
    phi = IndexedMorphism(
        builder.graph(),
        codomain,
        new_vmap,
        new_emap,
        "finite",
        origin if origin is not None else frozenset(domain.vertices),
    )
    return phi, attachments


def caporaso_to_finite(phi: IndexedMorphism) -> tuple[IndexedMorphism, list[Attachment]]:
    """
    Turn a non-degenerate harmonic morphism with collapsed edges into a finite one.

    Each collapsed edge e over x is subdivided once; its midpoint maps to a
    new leaf of the tree at x, the two halves carry the multiplicities of
    their endpoints, and every other vertex over x receives a leaf with its
    own multiplicity. The degree is unchanged.
    """
    report = verify(phi)
    if not report.harmonic or report.degree is None:
        raise NotHarmonicError("Only harmonic morphisms can be made finite")
    if report.degenerate:
        raise InvalidInputError(f"Degenerate vertices: {report.degenerate}")
    collapsed = [e for e in phi.domain.edges if phi.emap[e.id].index == 0]
    if not collapsed:
        finite = IndexedMorphism(
            phi.domain, phi.codomain, phi.vmap, phi.emap, "finite", phi.origin
        )
        return finite, []

    tree = GraphBuilder(phi.codomain)
    core = GraphBuilder()
    for v in phi.domain.vertices:
        core.add_vertex(v, Origin("vertex", v))
    vmap = dict(phi.vmap)
    emap: dict[str, EdgeImage] = {}
    for e in phi.domain.edges:
        target, r = phi.emap[e.id]
        if r > 0:
            emap[core.add_edge(e.u, e.v, e.id, e.id)] = EdgeImage(target, r)
            continue
        leaf = tree.add_vertex(f"{target}|{e.id}")
        spoke = tree.add_edge(target, leaf, f"{target}|{e.id}")
        mid = core.add_vertex(f"{e.id}.1", Origin("edge", e.id))
        vmap[mid] = leaf
        emap[core.add_edge(e.u, mid, f"{e.id}/1", e.id)] = EdgeImage(spoke, report.m[e.u])
        emap[core.add_edge(mid, e.v, f"{e.id}/2", e.id)] = EdgeImage(spoke, report.m[e.v])
    origin = phi.origin_vertices
    return complete_deficits(core.graph(), tree.graph(), vmap, emap, origin)
