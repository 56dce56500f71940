"""
Measured trees and the rebuild of a harmonic morphism around a heavy vertex.

The pushforward of the uniform measure on the original vertices of G turns
the codomain of φ: G' → T into a measured tree. Either that tree is thick
(some edge cuts off a large share of the mass), or one vertex carries a lot
of mass, or neither. In the last case `rebuild` produces a new refinement
G# of G and a finite harmonic morphism φ#: G# → T# whose degree is at most
Δ_G·deg φ and whose two central edges both cut off more than A/2:

  1. locate the central vertex x0 and split the components of T^s − x0
     (T^s the image of the subdivision part G^s of G') into a left and a
     right half of comparable mass;
  2. build S# by gluing all components at their vertex next to x0 and
     adding a leaf X, and T# from two copies of S# glued at X;
  3. restrict φ over each component, refine the restriction onto S#, and
     glue the pieces along the fibre of x0;
  4. balance every central vertex with a copy of S# carrying |d#(v)|.

pipeline_bound strings the three cases together into a lower bound on
deg φ.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from gonality.config import SPECTRAL_TOLERANCE, SPLIT_EXHAUSTIVE_MAX
from gonality.errors import (
    GonalityError,
    InvalidInputError,
    NotHarmonicError,
    PreconditionError,
    RebuildError,
)
from gonality.graph import (
    LEAF,
    GraphBuilder,
    MultiGraph,
    Origin,
    RefinementTrace,
    branch,
    degree,
    is_tree,
    max_degree,
    unrefine,
)
from gonality.models import format_fraction
from gonality.morphism import (
    EdgeImage,
    IndexedMorphism,
    pushforward,
    refine_codomain_traced,
    restrict,
    verify,
)
from gonality.spectral import lambda1

Side = Literal["L", "R"]
SideNames = dict[Side, dict[str, str]]
SIDES: tuple[Side, Side] = ("L", "R")


# --- Measured trees ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MeasuredTree:
    """A tree with a probability measure on its vertices."""

    tree: MultiGraph
    measure: Mapping[str, Fraction]

    def __post_init__(self) -> None:
        if not is_tree(self.tree):
            raise InvalidInputError("A measured tree needs a tree")
        if set(self.measure) != set(self.tree.vertices):
            raise InvalidInputError("The measure must be given on exactly the tree's vertices")
        if any(m < 0 for m in self.measure.values()):
            raise InvalidInputError("Measures are nonnegative")
        if sum(self.measure.values(), Fraction(0)) != 1:
            raise InvalidInputError("The measure must sum to 1")

    @classmethod
    def of(cls, phi: IndexedMorphism) -> "MeasuredTree":
        """The codomain of φ with the pushforward of the uniform measure on G."""
        return cls(phi.codomain, pushforward(phi))

    def mass(self, vertices: Iterable[str]) -> Fraction:
        return sum((self.measure[v] for v in vertices), Fraction(0))

    def beyond(self, x: str, eid: str) -> frozenset[str]:
        """Vertices of the component of T − x entered through edge `eid`."""
        return frozenset(branch(self.tree, x, eid).vertices) - {x}

    def component_masses(self, x: str) -> list[tuple[str, Fraction]]:
        """(edge at x, mass of the component of T − x behind it)."""
        return [(e.id, self.mass(self.beyond(x, e.id))) for e in self.tree.incident(x)]


def edge_size(tree: MeasuredTree, eid: str) -> Fraction:
    """min(ν(T1), ν(T2)) over the two sides of T − e."""
    e = tree.tree.edge(eid)
    one = tree.mass(tree.beyond(e.u, eid))
    return min(one, 1 - one)


def non_thick_witnesses(tree: MeasuredTree, c: Fraction) -> list[str]:
    """Vertices x all of whose components of T − x have mass < c."""
    return [
        x
        for x in tree.tree.vertices
        if all(mass < c for _, mass in tree.component_masses(x))
    ]


def is_c_thick(tree: MeasuredTree, c: Fraction) -> tuple[bool, str | None]:
    """Thickness, with a witness vertex when the tree is not c-thick."""
    if c <= 0:
        raise InvalidInputError("Thickness needs c > 0")
    witnesses = non_thick_witnesses(tree, c)
    return (False, witnesses[0]) if witnesses else (True, None)


def find_large_edge(tree: MeasuredTree, c: Fraction) -> str:
    """
    An edge of size at least c in a c-thick tree.

    Every vertex points the edge toward one of its heavy components at
    itself; with more vertices than edges, some edge is pointed at from both
    ends, and both of its sides are heavy.
    """
    thick, witness = is_c_thick(tree, c)
    if not thick:
        raise PreconditionError(f"Tree is not {c}-thick at {witness}", culprit=witness)
    pointed: dict[str, str] = {}
    for x in tree.tree.vertices:
        eid = next(eid for eid, mass in tree.component_masses(x) if mass >= c)
        if eid in pointed and pointed[eid] != x:
            return eid
        pointed[eid] = x
    raise GonalityError("No doubly oriented edge in a thick tree")


def witness_is_heavy(tree: MeasuredTree, c: Fraction, x: str) -> bool:
    """ν(x) > 1 − c·d_x, which holds at every non-thick witness x."""
    return tree.measure[x] > 1 - c * degree(tree.tree, x)


# --- Degree bounds ---------------------------------------------------------------


def trivial_degree_bound(tree: MeasuredTree, x: str, n: int) -> Fraction:
    """ν(x)·|G|: the original vertices over x alone force this degree."""
    return tree.measure[x] * n


def cheeger_degree_bound(lam: Fraction, size: Fraction, n: int) -> Fraction:
    """½·λ·size(e)·|G| for any edge e of the tree."""
    return lam * size * n / 2


def tree_degree_bound(lam: Fraction, n: int, tree_max_degree: int) -> Fraction:
    """min(λ/2, 1)·|G|/(Δ_T + 1), a bound that still depends on the tree."""
    return min(lam / 2, Fraction(1)) * Fraction(n, tree_max_degree + 1)


class RebuildParams(BaseModel):
    """Positive constants A, B, C with A + B + C ≤ 1."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    A: Fraction
    B: Fraction
    C: Fraction

    @field_validator("A", "B", "C", mode="before")
    @classmethod
    def _as_fraction(cls, value: Any) -> Fraction:
        try:
            result = Fraction(value) if not isinstance(value, float) else Fraction(str(value))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Not a rational number: {value!r}") from exc
        if result <= 0:
            raise ValueError("A, B and C must be positive")
        return result

    @model_validator(mode="after")
    def _sum_at_most_one(self) -> "RebuildParams":
        if self.A + self.B + self.C > 1:
            raise ValueError(f"A + B + C = {self.A + self.B + self.C} exceeds 1")
        return self

    @field_serializer("A", "B", "C")
    def _serialize(self, value: Fraction) -> str:
        return format_fraction(value)

    @classmethod
    def balanced(cls, lam: Fraction, delta: int) -> "RebuildParams":
        """The constants at which all three case bounds coincide."""
        if lam <= 0:
            raise InvalidInputError("Balanced constants need λ > 0")
        t = lam / (lam + 4 * (delta + 1))
        return cls(A=4 * delta * t / lam, B=t, C=4 * t / lam)


# --- The rebuild ------------------------------------------------------------------


@dataclass
class _Component:
    link: str  # tree edge x0–y
    root: str  # y
    vertices: frozenset[str]
    edges: tuple[str, ...]
    mass: Fraction


class LocalConstruction(BaseModel):
    """Summary of one local morphism φ_i#: G_i# → S#."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    side: Side
    root: str
    component: list[str]
    mass: Fraction
    pieces: int
    domain_vertices: int
    degree: int

    @field_serializer("mass")
    def _serialize_mass(self, value: Fraction) -> str:
        return format_fraction(value)


class RebuildSummary(BaseModel):
    """JSON-ready report of a rebuild."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x0: str
    center: str
    central_edge: str
    degree_before: int
    degree_after: int
    degree_cap: int
    size_left: Fraction
    size_right: Fraction
    size_threshold: Fraction
    dsharp: dict[str, int]
    local: list[LocalConstruction]

    @field_serializer("size_left", "size_right", "size_threshold")
    def _serialize_size(self, value: Fraction) -> str:
        return format_fraction(value)


@dataclass
class RebuildResult:
    """φ#: G# → T# with its central vertex and edge and the d# values."""

    domain: MultiGraph
    tree: MultiGraph
    phi: IndexedMorphism
    center: str
    central_edge: str
    dsharp: dict[str, int]
    summary: RebuildSummary
    central_sums: dict[str, tuple[int, int]] = field(default_factory=dict)


def core_edges(graph: MultiGraph, origin: Iterable[str]) -> frozenset[str]:
    """Edges of G^s: what is left after pruning non-original vertices of degree one."""
    keep = set(origin)
    alive = {e.id: e for e in graph.edges if not e.is_loop}
    count = Counter(x for e in alive.values() for x in (e.u, e.v))
    stack = [v for v in graph.vertices if v not in keep and count[v] == 1]
    while stack:
        v = stack.pop()
        if count[v] != 1:
            continue
        eid = next(eid for eid, e in alive.items() if v in (e.u, e.v))
        w = alive.pop(eid).other(v)
        count[v] -= 1
        count[w] -= 1
        if w not in keep and count[w] == 1:
            stack.append(w)
    return frozenset(alive)


def _components_at(
    tree: MultiGraph, tree_edges: frozenset[str], x0: str, nu: MeasuredTree
) -> list[_Component]:
    """Components of T^s − x0, one per T^s edge at x0."""
    core = tree.subgraph(tree_edges)
    out = []
    for link in core.incident(x0):
        part = branch(core, x0, link.id)
        y = link.other(x0)
        vertices = frozenset(part.vertices) - {x0}
        edges = tuple(e.id for e in part.edges if e.id != link.id)
        out.append(_Component(link.id, y, vertices, edges, nu.mass(vertices)))
    return out


def split_components(masses: Sequence[Fraction], bound: Fraction) -> tuple[list[int], list[int]]:
    """
    Split component indices into two sides, each of mass > bound.

    Greedy first: largest first into the lighter side, ties to the left.
    If that misses the bound, all two-colourings are tried up to
    SPLIT_EXHAUSTIVE_MAX components, maximising the lighter side.
    """
    left: list[int] = []
    right: list[int] = []
    sums = [Fraction(0), Fraction(0)]
    for i in sorted(range(len(masses)), key=lambda i: (-masses[i], i)):
        side = 0 if sums[0] <= sums[1] else 1
        (left, right)[side].append(i)
        sums[side] += masses[i]
    if min(sums) > bound:
        return sorted(left), sorted(right)
    logging.info("Greedy split reaches only %s (needs > %s)", min(sums), bound)
    if len(masses) > SPLIT_EXHAUSTIVE_MAX:
        raise RebuildError(
            f"Greedy split reaches {min(sums)} <= {bound} and {len(masses)} components "
            f"are too many for the exhaustive split"
        )
    total = sum(masses, Fraction(0))
    best_mask, best = 0, Fraction(-1)
    for mask in range(1 << (len(masses) - 1)):
        lhs = sum((m for i, m in enumerate(masses) if mask >> i & 1), Fraction(0))
        if min(lhs, total - lhs) > best:
            best_mask, best = mask, min(lhs, total - lhs)
    if best <= bound:
        raise RebuildError(f"No split gives both sides mass > {bound}; best is {best}")
    chosen = [i for i in range(len(masses)) if best_mask >> i & 1]
    return chosen, [i for i in range(len(masses)) if not best_mask >> i & 1]


@dataclass
class _Sharp:
    """S# with the names of its leaf X and merged vertex Y."""

    graph: MultiGraph
    x: str
    y: str
    link: str


def _build_s_sharp(components: Sequence[_Component], tree: MultiGraph) -> _Sharp:
    """S#: all components glued at their roots into Y, plus the leaf X."""
    builder = GraphBuilder()
    roots = {c.root for c in components}
    for v in tree.vertices:
        if any(v in c.vertices for c in components) and v not in roots:
            builder.add_vertex(v, Origin("vertex", v))
    y = builder.add_vertex("Y")
    x = builder.add_vertex("X")
    for c in components:
        for eid in c.edges:
            e = tree.edge(eid)
            u, v = (y if e.u in roots else e.u), (y if e.v in roots else e.v)
            builder.add_edge(u, v, eid, eid)
    link = builder.add_edge(x, y, "XY")
    return _Sharp(builder.graph(), x, y, link)


def _build_t_sharp(sharp: _Sharp, center: str) -> tuple[MultiGraph, SideNames, SideNames]:
    """T#: two copies of S# glued at X; returns vertex and edge names per side."""
    builder = GraphBuilder()
    builder.add_vertex(center, Origin("vertex", center))
    vnames: dict[Side, dict[str, str]] = {}
    enames: dict[Side, dict[str, str]] = {}
    for side in SIDES:
        vnames[side] = {sharp.x: center}
        for s in sharp.graph.vertices:
            if s != sharp.x:
                vnames[side][s] = builder.add_vertex(f"{side}.{s}")
        enames[side] = {
            e.id: builder.add_edge(vnames[side][e.u], vnames[side][e.v], f"{side}.{e.id}")
            for e in sharp.graph.edges
        }
    return builder.graph(), vnames, enames


def _local_trace(
    component: _Component, local_tree: MultiGraph, sharp: _Sharp, x0: str
) -> RefinementTrace:
    """How S# refines S_i = T^s_i + the edge x0–y_i."""
    edge_origin: dict[str, str | None] = {}
    for e in sharp.graph.edges:
        if e.id == sharp.link:
            edge_origin[e.id] = component.link
        elif e.id in component.edges:
            edge_origin[e.id] = e.id
        else:
            edge_origin[e.id] = None
    vertex_origin: dict[str, Origin] = {}
    for s in sharp.graph.vertices:
        if s == sharp.x:
            vertex_origin[s] = Origin("vertex", x0)
        elif s == sharp.y:
            vertex_origin[s] = Origin("vertex", component.root)
        elif s in component.vertices:
            vertex_origin[s] = Origin("vertex", s)
        else:
            vertex_origin[s] = LEAF
    return RefinementTrace(local_tree, sharp.graph, edge_origin, vertex_origin)


def _local_domain(
    phi: IndexedMorphism, local_tree: MultiGraph, core: frozenset[str]
) -> list[str]:
    """Edges of G_i'': components of φ⁻¹(S_i) that meet G^s."""
    over = {e.id for e in local_tree.edges}
    edges = [e.id for e in phi.domain.edges if phi.emap[e.id].target in over]
    if not edges:
        return []
    keep: list[str] = []
    for part in phi.domain.subgraph(edges).components():
        ids = [e.id for e in part.edges]
        if core.intersection(ids):
            keep.extend(ids)
    return keep


def _check_preconditions(nu: MeasuredTree, params: RebuildParams) -> str:
    thick, witness = is_c_thick(nu, params.C / 2)
    if thick:
        edge = find_large_edge(nu, params.C / 2)
        raise PreconditionError(
            f"Not rebuildable: the measured tree is {params.C / 2}-thick; "
            f"edge {edge} has size {edge_size(nu, edge)}",
            culprit=edge,
        )
    heavy = [y for y in nu.tree.vertices if nu.measure[y] >= params.B]
    if heavy:
        raise PreconditionError(
            f"Not rebuildable: vertex {heavy[0]} has measure "
            f"{nu.measure[heavy[0]]} >= B = {params.B}",
            culprit=heavy[0],
        )
    witnesses = non_thick_witnesses(nu, params.C / 2)
    if len(witnesses) != 1:
        raise GonalityError(f"Expected a unique central vertex, found {witnesses}")
    assert witness is not None
    if not witness_is_heavy(nu, params.C / 2, witness):
        raise GonalityError(f"Central vertex {witness} is lighter than 1 - c*d_x")
    return witness


def _endpoint_multiset(graph: MultiGraph, rename: Mapping[str, str]) -> Counter[frozenset[str]]:
    return Counter(frozenset((rename.get(e.u, e.u), rename.get(e.v, e.v))) for e in graph.edges)


def rebuild(phi: IndexedMorphism, params: RebuildParams) -> RebuildResult:
    """
    Build φ#: G# → T# with deg φ# ≤ Δ_G·deg φ and both central edges of size > A/2.

    `phi` must be a finite harmonic morphism from a refinement of G to a
    tree, with `phi.origin` naming the vertices of G. Raises
    PreconditionError when the measured tree is (C/2)-thick or a vertex
    has measure ≥ B, and RebuildError when a postcondition fails.
    """
    if phi.variant != "finite" or not is_tree(phi.codomain):
        raise InvalidInputError("rebuild needs a finite morphism to a tree")
    report = verify(phi)
    if not report.harmonic or report.degree is None:
        raise NotHarmonicError(f"Morphism is not harmonic: {report.violations[:3]}")
    origin = phi.origin_vertices
    base = unrefine(phi.domain, origin)
    delta = max_degree(base)
    nu = MeasuredTree.of(phi)
    x0 = _check_preconditions(nu, params)
    logging.info("Central vertex %s with measure %s", x0, nu.measure[x0])

    core = core_edges(phi.domain, origin)
    image = frozenset(phi.emap[eid].target for eid in core)
    components = _components_at(phi.codomain, image, x0, nu)
    left_idx, right_idx = split_components([c.mass for c in components], params.A / 2)
    side_of: dict[int, Side] = {i: "L" for i in left_idx} | {i: "R" for i in right_idx}
    logging.info(
        "Split %d components: left %s, right %s",
        len(components),
        [components[i].root for i in left_idx],
        [components[i].root for i in right_idx],
    )

    sharp = _build_s_sharp(components, phi.codomain)
    t_sharp, vnames, enames = _build_t_sharp(sharp, x0)
    central = {side: enames[side][sharp.link] for side in SIDES}

    builder = GraphBuilder()
    shared: dict[str, str] = {}
    vmap: dict[str, str] = {}
    emap: dict[str, EdgeImage] = {}
    rename: dict[str, str] = {}
    new_origin: set[str] = set()
    sums: dict[str, dict[Side, int]] = {}
    local: list[LocalConstruction] = []

    for i, component in enumerate(components):
        side = side_of[i]
        local_tree = phi.codomain.subgraph([component.link, *component.edges])
        edges = _local_domain(phi, local_tree, core)
        if not edges:
            continue
        piece = restrict(phi, edges, local_tree)
        trace = _local_trace(component, local_tree, sharp, x0)
        local_phi, _ = refine_codomain_traced(piece, sharp.graph, trace)
        names: dict[str, str] = {}
        for v in local_phi.domain.vertices:
            if local_phi.vmap[v] == sharp.x:
                if v not in shared:
                    shared[v] = builder.add_vertex(v, Origin("vertex", v))
                    sums[shared[v]] = {"L": 0, "R": 0}
                names[v] = shared[v]
            else:
                names[v] = builder.add_vertex(v, Origin("vertex", v))
            vmap[names[v]] = vnames[side][local_phi.vmap[v]]
            rename[names[v]] = v
            if v in origin:
                new_origin.add(names[v])
        for e in local_phi.domain.edges:
            eid = builder.add_edge(names[e.u], names[e.v], e.id, e.id)
            target, r = local_phi.emap[e.id]
            emap[eid] = EdgeImage(enames[side][target], r)
            for end in (names[e.u], names[e.v]):
                if end in sums:
                    sums[end][side] += r
        local_degree = verify(local_phi).degree or 0
        local.append(
            LocalConstruction(
                side=side,
                root=component.root,
                component=sorted(component.vertices),
                mass=component.mass,
                pieces=len(piece.domain.components()),
                domain_vertices=len(local_phi.domain.vertices),
                degree=local_degree,
            )
        )

    dsharp = {v: s["L"] - s["R"] for v, s in sums.items()}
    for v, d in dsharp.items():
        if d == 0:
            continue
        lighter: Side = "R" if d > 0 else "L"
        vcopy, ecopy = builder.graft(v, sharp.graph, sharp.x, f"{v}^")
        for s, copy in vcopy.items():
            if copy != v:
                vmap[copy] = vnames[lighter][s]
        for te, copy in ecopy.items():
            emap[copy] = EdgeImage(enames[lighter][te], abs(d))

    domain = builder.graph()
    phi_sharp = IndexedMorphism(domain, t_sharp, vmap, emap, "finite", frozenset(new_origin))
    central_sums = {v: (s["L"], s["R"]) for v, s in sums.items()}
    return _finish(
        phi_sharp, base, rename, params, delta, x0, central, central_sums, local, report.degree
    )


def _finish(
    phi_sharp: IndexedMorphism,
    base: MultiGraph,
    rename: Mapping[str, str],
    params: RebuildParams,
    delta: int,
    x0: str,
    central: Mapping[Side, str],
    central_sums: dict[str, tuple[int, int]],
    local: list[LocalConstruction],
    degree_before: int,
) -> RebuildResult:
    """Check every postcondition of the rebuild and package the result."""
    dsharp = {v: left - right for v, (left, right) in central_sums.items()}
    checked = verify(phi_sharp)
    if not checked.harmonic or checked.degree is None:
        raise RebuildError(f"Rebuilt morphism is not harmonic: {checked.violations[:3]}")
    for v, (left, right) in central_sums.items():
        if checked.m[v] != max(left, right):
            raise RebuildError(f"m({v}) = {checked.m[v]}, expected max({left}, {right})")
    cap = delta * degree_before
    if checked.degree > cap:
        raise RebuildError(f"Rebuilt degree {checked.degree} exceeds Δ·deg = {cap}")

    nu_sharp = MeasuredTree.of(phi_sharp)
    sizes = {side: edge_size(nu_sharp, central[side]) for side in SIDES}
    threshold = params.A / 2
    if min(sizes.values()) <= threshold:
        raise RebuildError(f"Central edge sizes {sizes} do not exceed A/2 = {threshold}")

    unrefined = unrefine(phi_sharp.domain, phi_sharp.origin_vertices)
    if _endpoint_multiset(unrefined, rename) != _endpoint_multiset(base, {}):
        raise RebuildError("G# does not refine G")

    central_edge = max(central.values(), key=lambda eid: (edge_size(nu_sharp, eid), eid))
    summary = RebuildSummary(
        x0=x0,
        center=x0,
        central_edge=central_edge,
        degree_before=degree_before,
        degree_after=checked.degree,
        degree_cap=cap,
        size_left=sizes["L"],
        size_right=sizes["R"],
        size_threshold=threshold,
        dsharp=dsharp,
        local=local,
    )
    logging.info(
        "Rebuilt degree %d (cap %d), central sizes %s / %s",
        checked.degree,
        cap,
        sizes["L"],
        sizes["R"],
    )
    return RebuildResult(
        phi_sharp.domain,
        phi_sharp.codomain,
        phi_sharp,
        x0,
        central_edge,
        dsharp,
        summary,
        central_sums,
    )


# --- Pipeline ---------------------------------------------------------------------


class PipelineBound(BaseModel):
    """Which case applied and the lower bound on deg φ it gives."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    case: Literal["thick", "heavy", "rebuild"]
    value: Fraction
    degree: int
    witness: str

    @field_serializer("value")
    def _serialize_value(self, value: Fraction) -> str:
        return format_fraction(value)


def pipeline_bound(
    phi: IndexedMorphism,
    params: RebuildParams,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
) -> PipelineBound:
    """
    Lower bound on deg φ from whichever of the three cases applies.

    (C/2)-thick: (C/4)·λ·|G|. A vertex of measure ≥ B: B·|G|. Otherwise
    rebuild, and (A/(4Δ))·λ·|G| from the central edge of φ#.
    """
    report = verify(phi)
    if not report.harmonic or report.degree is None:
        raise NotHarmonicError(f"Morphism is not harmonic: {report.violations[:3]}")
    base = unrefine(phi.domain, phi.origin_vertices)
    n = len(base.vertices)
    nu = MeasuredTree.of(phi)
    thick, _ = is_c_thick(nu, params.C / 2)
    heavy = [y for y in nu.tree.vertices if nu.measure[y] >= params.B]
    if thick:
        lam = lambda1(base, tolerance).lower
        bound = PipelineBound(
            case="thick",
            value=params.C / 4 * lam * n,
            degree=report.degree,
            witness=find_large_edge(nu, params.C / 2),
        )
    elif heavy:
        bound = PipelineBound(
            case="heavy", value=params.B * n, degree=report.degree, witness=heavy[0]
        )
    else:
        lam = lambda1(base, tolerance).lower
        result = rebuild(phi, params)
        bound = PipelineBound(
            case="rebuild",
            value=params.A / (4 * max_degree(base)) * lam * n,
            degree=report.degree,
            witness=result.central_edge,
        )
    if bound.value > report.degree:
        raise GonalityError(
            f"Bound {bound.value} from the {bound.case} case exceeds deg φ = {report.degree}"
        )
    logging.info("Pipeline bound (%s): %s <= %d", bound.case, bound.value, report.degree)
    return bound

