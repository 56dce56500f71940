"""Tests for indexed morphisms: harmonicity, refinement and completion."""

from fractions import Fraction

import pytest

from gonality.errors import InvalidInputError, NotHarmonicError
from gonality.generators import cn, kn
from gonality.graph import Edge, MultiGraph, attach_path, is_isomorphic, subdivide_edges, unrefine
from gonality.morphism import (
    EdgeImage,
    IndexedMorphism,
    caporaso_to_finite,
    complete_deficits,
    deficits,
    degree,
    identity_morphism,
    pushforward,
    refine_codomain,
    refine_domain,
    restrict,
    verify,
)


def tree_from(edges: list[tuple[str, str, str]]) -> MultiGraph:
    """A codomain tree with explicit edge ids."""
    vertices: dict[str, None] = {}
    for _, u, v in edges:
        vertices.setdefault(u)
        vertices.setdefault(v)
    return MultiGraph(tuple(vertices), tuple(Edge(*e) for e in edges))


@pytest.fixture
def c4_fold() -> IndexedMorphism:
    """C_4 folded onto the path x - y - z: degree 2."""
    tree = tree_from([("t1", "x", "y"), ("t2", "y", "z")])
    return IndexedMorphism(
        cn(4),
        tree,
        {"1": "x", "2": "y", "4": "y", "3": "z"},
        {
            "e1": EdgeImage("t1", 1),
            "e4": EdgeImage("t1", 1),
            "e2": EdgeImage("t2", 1),
            "e3": EdgeImage("t2", 1),
        },
    )


@pytest.fixture
def k3_caporaso() -> IndexedMorphism:
    """K_3 with edge 1-2 collapsed onto x and vertex 3 over y."""
    tree = tree_from([("t", "x", "y")])
    return IndexedMorphism(
        kn(3),
        tree,
        {"1": "x", "2": "x", "3": "y"},
        {"e1": EdgeImage("x", 0), "e2": EdgeImage("t", 1), "e3": EdgeImage("t", 1)},
        variant="caporaso",
    )


def test_fold_is_harmonic_of_degree_two(c4_fold: IndexedMorphism) -> None:
    """The ends 1 and 3 fold their two edges onto one, so m = 2 there."""
    report = verify(c4_fold)
    assert report.harmonic
    assert report.degree == 2
    assert report.m == {"1": 2, "2": 1, "3": 2, "4": 1}
    assert report.non_degenerate
    assert degree(c4_fold) == 2


def test_identity_has_degree_one() -> None:
    assert degree(identity_morphism(cn(5))) == 1


def test_local_violation_is_reported() -> None:
    """A vertex that misses one direction of its image star is not harmonic."""
    star = tree_from([("tx", "x", "y"), ("tz", "y", "z"), ("tw", "y", "w")])
    phi = IndexedMorphism(
        MultiGraph.from_pairs([("a", "b"), ("b", "c")]),
        star,
        {"a": "x", "b": "y", "c": "z"},
        {"e1": EdgeImage("tx", 1), "e2": EdgeImage("tz", 1)},
    )
    report = verify(phi)
    assert not report.harmonic
    assert report.violations[0].vertex == "b"
    assert report.degree is None
    with pytest.raises(NotHarmonicError):
        degree(phi)


def test_construction_checks() -> None:
    """Finite morphisms cannot collapse; edge images must join the vertex images."""
    tree = tree_from([("t", "x", "y")])
    graph = MultiGraph.from_pairs([("a", "b")])
    with pytest.raises(InvalidInputError):
        IndexedMorphism(graph, tree, {"a": "x", "b": "x"}, {"e1": EdgeImage("x", 0)})
    with pytest.raises(InvalidInputError):
        IndexedMorphism(graph, tree, {"a": "x", "b": "x"}, {"e1": EdgeImage("t", 1)})
    with pytest.raises(InvalidInputError):
        IndexedMorphism(graph, tree, {"a": "x"}, {"e1": EdgeImage("t", 1)})


def test_pushforward_of_fold(c4_fold: IndexedMorphism) -> None:
    """The uniform measure on C_4 pushes to 1/4, 1/2, 1/4."""
    assert pushforward(c4_fold) == {
        "x": Fraction(1, 4),
        "y": Fraction(1, 2),
        "z": Fraction(1, 4),
    }
    with pytest.raises(InvalidInputError):
        pushforward(c4_fold, [])


def test_restrict_keeps_images(c4_fold: IndexedMorphism) -> None:
    """Half of the fold is a degree one map of a path."""
    half = restrict(c4_fold, ["e1", "e2"], c4_fold.codomain)
    assert half.domain.vertices == ("1", "2", "3")
    assert degree(half) == 1


def test_refine_codomain_by_subdivision(c4_fold: IndexedMorphism) -> None:
    """Subdividing t1 subdivides both edges over it; the degree stays 2."""
    refined, trace = subdivide_edges(c4_fold.codomain, {"t1": 1})
    lifted = refine_codomain(c4_fold, refined, trace)
    assert len(lifted.domain.vertices) == 6
    assert degree(lifted) == 2


def test_refine_codomain_copies_leaf_trees(c4_fold: IndexedMorphism) -> None:
    """A leaf-path at y is copied at both points over y."""
    refined, trace = attach_path(c4_fold.codomain, "y", 1)
    lifted = refine_codomain(c4_fold, refined, trace)
    assert len(lifted.domain.vertices) == 6
    assert len(lifted.domain.edges) == 6
    assert degree(lifted) == 2


def test_refine_domain_uses_common_multiple(c4_fold: IndexedMorphism) -> None:
    """Splitting e1 into three segments splits t1, and so e4, into three."""
    refined, trace = subdivide_edges(c4_fold.domain, {"e1": 2})
    lifted = refine_domain(c4_fold, refined, trace)
    assert degree(lifted) == 2
    assert len(lifted.codomain.edges) == 4
    assert len(lifted.domain.vertices) == 8
    assert is_isomorphic(unrefine(lifted.domain, c4_fold.domain.vertices), cn(4))


def test_refinement_requires_finite_harmonic(k3_caporaso: IndexedMorphism) -> None:
    refined, trace = subdivide_edges(k3_caporaso.codomain, {"t": 1})
    with pytest.raises(InvalidInputError):
        refine_codomain(k3_caporaso, refined, trace)


def test_caporaso_morphism_is_harmonic(k3_caporaso: IndexedMorphism) -> None:
    """Collapsed edges contribute nothing to the local sums."""
    report = verify(k3_caporaso)
    assert report.harmonic
    assert report.degree == 2
    assert report.m == {"1": 1, "2": 1, "3": 2}


def test_caporaso_to_finite_keeps_degree(k3_caporaso: IndexedMorphism) -> None:
    """The collapsed edge is subdivided and its midpoint sent to a new leaf."""
    finite, attachments = caporaso_to_finite(k3_caporaso)
    assert finite.variant == "finite"
    assert degree(finite) == 2
    assert attachments == []
    assert "e1.1" in finite.domain.vertices
    assert len(finite.codomain.vertices) == 3
    assert finite.origin == frozenset({"1", "2", "3"})


def test_caporaso_to_finite_without_collapse(c4_fold: IndexedMorphism) -> None:
    """Without collapsed edges only the variant changes."""
    as_caporaso = IndexedMorphism(
        c4_fold.domain, c4_fold.codomain, c4_fold.vmap, c4_fold.emap, "caporaso"
    )
    finite, attachments = caporaso_to_finite(as_caporaso)
    assert finite.variant == "finite"
    assert finite.domain is c4_fold.domain
    assert attachments == []


def test_degenerate_vertex_is_rejected() -> None:
    """A vertex whose edges are all collapsed has multiplicity zero."""
    tree = tree_from([("t", "x", "y")])
    phi = IndexedMorphism(
        MultiGraph.from_pairs([("1", "2"), ("2", "3")]),
        tree,
        {"1": "x", "2": "x", "3": "y"},
        {"e1": EdgeImage("x", 0), "e2": EdgeImage("t", 1)},
        variant="caporaso",
    )
    report = verify(phi)
    assert report.degenerate == ["1"]
    with pytest.raises(InvalidInputError):
        caporaso_to_finite(phi)


def test_complete_deficits_hangs_branch() -> None:
    """A missing direction at b is filled by a copy of the branch beyond it."""
    star = tree_from([("txy", "x", "y"), ("tyz", "y", "z")])
    domain = MultiGraph.from_pairs([("a", "b")])
    vmap = {"a": "x", "b": "y"}
    emap = {"e1": EdgeImage("txy", 1)}
    m, short = deficits(domain, star, vmap, emap)
    assert m == {"a": 1, "b": 1}
    assert short == [("b", "tyz", 1)]
    phi, attachments = complete_deficits(domain, star, vmap, emap)
    assert len(attachments) == 1
    assert attachments[0].vertex == "b"
    assert degree(phi) == 1
    assert phi.origin == frozenset({"a", "b"})
