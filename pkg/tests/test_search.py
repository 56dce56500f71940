"""Tests for the budgeted gonality searches and their verified witnesses."""

import pytest

from gonality.chipfire import divisorial_gonality
from gonality.errors import InvalidInputError
from gonality.generators import bn, cn, kn, knn, path
from gonality.graph import (
    MultiGraph,
    degree,
    edge_connectivity,
    genus,
    is_complete,
    is_simple,
    is_tree,
    subdivide_edge,
    subdivide_edges,
    treewidth,
)
from gonality.models import BoundKind, SearchBudget
from gonality.morphism import verify
from gonality.search import (
    enumerate_partitions,
    gon,
    min_finite_harmonic_degree,
    sgon,
    sgon_certify,
    sgon_lower_bounds,
    subdivision_vectors,
)
from gonality.spectral import lambda1, sgon_lower_bound, sgon_lower_bound_normalized


def test_subdivision_vectors_start_uniform() -> None:
    """Uniform vectors come first, then by total."""
    assert list(subdivision_vectors(2, 1)) == [(0, 0), (1, 1), (0, 1), (1, 0)]
    assert len(list(subdivision_vectors(3, 2))) == 27


def test_partitions_of_c4() -> None:
    """C_4 has three strict tree partitions; none collapses an edge."""
    graph = cn(4)
    partitions = enumerate_partitions(graph)
    assert len(partitions) == 3
    for partition in partitions:
        assert partition.is_tree()
        cell_of = partition.cell_of
        assert all(cell_of[e.u] != cell_of[e.v] for e in graph.edges)


def test_partitions_of_an_edge() -> None:
    """A single edge has one partition in both modes."""
    assert len(enumerate_partitions(path(2), "strict")) == 1
    assert len(enumerate_partitions(path(2), "caporaso")) == 1


def test_caporaso_partitions_may_collapse_edges() -> None:
    partitions = enumerate_partitions(cn(3), "caporaso")
    assert partitions, "a triangle folds onto an edge"
    assert all(p.is_tree() for p in partitions)
    assert enumerate_partitions(cn(3), "strict") == []


@pytest.mark.parametrize(("graph", "expected"), [(cn(4), 2), (cn(6), 2), (knn(3), 3), (path(3), 1)])
def test_min_finite_degree(graph: MultiGraph, expected: int) -> None:
    """Exact minimal degree of a finite harmonic morphism from the graph itself."""
    outcome = min_finite_harmonic_degree(graph)
    assert outcome.exhaustive
    assert outcome.exact
    assert outcome.upper == expected
    assert outcome.witness is not None
    assert verify(outcome.witness).degree == expected
    assert outcome.witness.variant == "finite"


@pytest.mark.parametrize("graph", [cn(3), cn(5), kn(4)])
def test_no_finite_morphism_from_non_bipartite_cycles(graph: MultiGraph) -> None:
    """Odd cycles and K_4 admit no finite harmonic morphism to a tree."""
    outcome = min_finite_harmonic_degree(graph)
    assert outcome.upper is None
    assert outcome.witness is None
    assert outcome.exhaustive
    assert outcome.reason


def test_max_degree_limits_the_horizon() -> None:
    outcome = min_finite_harmonic_degree(knn(3), max_degree=2)
    assert outcome.upper is None
    assert outcome.exhaustive


def test_node_limit_gives_an_interval() -> None:
    """Stopping early keeps only what was proven."""
    outcome = min_finite_harmonic_degree(knn(3), node_limit=3)
    assert not outcome.exhaustive
    assert outcome.lower <= 3


@pytest.mark.parametrize(
    ("graph", "expected"),
    [(kn(3), 2), (kn(4), 3), (kn(5), 4), (cn(5), 2), (bn(3), 3), (bn(4), 4), (knn(3), 3), (path(3), 1)],
)
def test_gon(graph: MultiGraph, expected: int) -> None:
    """Caporaso gonality of the standard families."""
    outcome = gon(graph)
    assert outcome.exact, outcome.reason
    assert outcome.upper == expected
    assert outcome.witness is not None
    report = verify(outcome.witness)
    assert report.harmonic and report.non_degenerate
    assert report.degree == expected
    assert len(outcome.witness.codomain.edges) >= 1


def test_gon_rejects_loops() -> None:
    with pytest.raises(InvalidInputError):
        gon(MultiGraph.from_pairs([("a", "b"), ("b", "b")]))


def test_sgon_lower_bounds_of_k4() -> None:
    bounds = {label: value for label, value, _ in sgon_lower_bounds(kn(4))}
    assert bounds == {"spectral": 1, "treewidth": 3, "genus": 2}


def test_sgon_of_tree_is_one() -> None:
    outcome = sgon(path(4))
    assert outcome.exact and outcome.upper == 1


def test_sgon_of_b2_from_the_gon_seed() -> None:
    """The gon witness of B_2 has no collapsed edge and already meets the floor."""
    outcome = sgon(bn(2), SearchBudget(max_subdivisions=1, max_leaf_paths=0))
    assert outcome.exact
    assert outcome.upper == 2
    assert outcome.witness is not None
    assert outcome.witness.variant == "finite"


@pytest.mark.parametrize("n", [3, 4])
def test_sgon_of_banana_needs_subdivision(n: int) -> None:
    """Subdividing every edge of B_n once gives a degree two map onto a star."""
    outcome = sgon(bn(n), SearchBudget(max_subdivisions=1, max_leaf_paths=0))
    assert outcome.exact
    assert outcome.upper == 2
    assert outcome.witness is not None
    assert verify(outcome.witness).degree == 2
    assert len(outcome.witness.codomain.vertices) == n + 1
    assert outcome.witness.origin == frozenset({"a", "b"})


def test_sgon_of_k4_uses_leaves() -> None:
    """The collapsed triangle of the gon witness is made finite with short leaves."""
    budget = SearchBudget(max_subdivisions=1, max_leaf_paths=6, max_leaf_length=2)
    outcome = sgon(kn(4), budget)
    assert outcome.exact
    assert outcome.upper == 3
    assert outcome.witness is not None
    assert verify(outcome.witness).degree == 3


def test_sgon_of_k4_without_refinement_is_only_an_interval() -> None:
    """Neither subdivisions nor leaves: only the lower bound is known."""
    budget = SearchBudget(max_subdivisions=0, max_leaf_paths=0)
    outcome = sgon(kn(4), budget)
    assert outcome.lower == 3
    assert outcome.upper is None
    assert not outcome.exact


def test_sgon_certify_report() -> None:
    """The report carries search, Brill–Noether and divisorial results."""
    budget = SearchBudget(max_subdivisions=1, max_leaf_paths=6, max_leaf_length=2)
    report = sgon_certify(kn(4), budget, name="k4")
    assert report.status == "exact"
    assert report.best("sgon", BoundKind.LOWER) == 3
    assert report.best("sgon", BoundKind.UPPER) == 3
    assert report.best("dgon", BoundKind.LOWER) == 3
    assert report.best("dgon", BoundKind.UPPER) == 3
    assert report.witness is not None


def test_sgon_certify_interval() -> None:
    report = sgon_certify(kn(4), SearchBudget(max_subdivisions=0, max_leaf_paths=0))
    assert report.status == "interval"
    assert report.best("sgon", BoundKind.UPPER) == 3, "Brill–Noether still caps sgon"


@pytest.mark.slow
def test_uniform_subdivision_of_k4_without_leaves() -> None:
    """One point on every edge of K_4 leaves a graph of finite gonality exactly 4."""
    refined, _ = subdivide_edges(kn(4), {f"e{i}": 1 for i in range(1, 7)})
    outcome = min_finite_harmonic_degree(refined, max_degree=4)
    assert outcome.upper == 4, f"expected 4, got {outcome.upper}"
    assert outcome.exact
    assert outcome.witness is not None
    assert verify(outcome.witness).degree == 4


@pytest.mark.slow
def test_search_agrees_with_divisor_theory(small_random_corpus: list[MultiGraph]) -> None:
    """treewidth <= dgon <= gon and dgon <= every sgon witness degree."""
    budget = SearchBudget(max_subdivisions=1, max_leaf_paths=2, max_leaf_length=1, node_limit=200_000)
    for graph in small_random_corpus:
        if graph.has_loops:
            continue
        found = divisorial_gonality(graph)
        assert found is not None
        dgon = found[0]
        assert treewidth(graph) <= dgon, f"treewidth above dgon on {graph.edges}"
        caporaso = gon(graph, node_limit=200_000)
        if caporaso.upper is not None:
            assert dgon <= caporaso.upper, f"dgon above gon on {graph.edges}"
            assert caporaso.witness is not None
            assert verify(caporaso.witness).degree == caporaso.upper
        stable = sgon(graph, budget)
        if stable.upper is not None:
            assert stable.lower <= stable.upper
            assert dgon <= stable.upper, f"dgon above an sgon witness on {graph.edges}"
            if is_tree(graph):
                assert stable.upper == 1


def _regular_degree(graph: MultiGraph) -> int | None:
    degrees = {degree(graph, v) for v in graph.vertices}
    return degrees.pop() if len(degrees) == 1 else None


@pytest.mark.slow
def test_invariant_inequalities_on_random_graphs(random_corpus: list[MultiGraph]) -> None:
    """
    The classical inequalities between the invariants hold on every random graph.

    eta <= gon, Fiedler <= eta on simple non-complete graphs,
    dgon >= min(|G|, eta), sgon <= floor((g+3)/2), sgon unchanged by a
    subdivision and both spectral bounds equal on regular graphs.
    """
    budget = SearchBudget(max_subdivisions=1, max_leaf_paths=2, max_leaf_length=1, node_limit=20_000)
    for graph in random_corpus:
        eta = edge_connectivity(graph)
        if is_simple(graph) and not is_complete(graph):
            assert lambda1(graph).lower <= eta, f"Fiedler above eta on {graph.edges}"

        found = divisorial_gonality(graph)
        assert found is not None
        assert found[0] >= min(len(graph.vertices), eta), f"dgon below min(|G|, eta) on {graph.edges}"

        if _regular_degree(graph) is not None:
            assert sgon_lower_bound(graph) == sgon_lower_bound_normalized(graph), (
                f"spectral bounds differ on the regular graph {graph.edges}"
            )

        if len(graph.vertices) > 6 or len(graph.edges) > 9:
            continue
        if not graph.has_loops:
            caporaso = gon(graph, node_limit=20_000)
            if caporaso.witness is not None:
                assert eta <= verify(caporaso.witness).degree, f"gon below eta on {graph.edges}"

        stable = sgon(graph, budget)
        g = genus(graph)
        if stable.exact and g >= 2:
            assert stable.upper is not None
            assert stable.upper <= (g + 3) // 2, f"sgon above Brill–Noether on {graph.edges}"
        if stable.exact:
            refined, _ = subdivide_edge(graph, graph.edges[0].id)
            again = sgon(refined, budget)
            if again.exact:
                assert again.upper == stable.upper, f"subdivision changed sgon on {graph.edges}"
