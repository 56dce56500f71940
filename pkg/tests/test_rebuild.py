"""Tests for measured trees, the split, the rebuild and the three-case pipeline."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from gonality.errors import InvalidInputError, PreconditionError, RebuildError
from gonality.generators import WorkedExample, cn
from gonality.graph import Edge, MultiGraph, genus, max_degree, unrefine
from gonality.morphism import EdgeImage, IndexedMorphism, pushforward, verify
from gonality.rebuild import (
    MeasuredTree,
    RebuildParams,
    cheeger_degree_bound,
    core_edges,
    edge_size,
    find_large_edge,
    is_c_thick,
    non_thick_witnesses,
    pipeline_bound,
    rebuild,
    split_components,
    tree_degree_bound,
    trivial_degree_bound,
    witness_is_heavy,
)

WORKED_PARAMS = RebuildParams(A=Fraction(1, 5), B=Fraction(3, 10), C=Fraction(1, 2))


@pytest.fixture
def c4_fold() -> IndexedMorphism:
    """C_4 folded onto x - y - z; the pushforward is 1/4, 1/2, 1/4."""
    tree = MultiGraph(("x", "y", "z"), (Edge("t1", "x", "y"), Edge("t2", "y", "z")))
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


def test_measured_tree_validation() -> None:
    path = MultiGraph.from_pairs([("x", "y")])
    with pytest.raises(InvalidInputError):
        MeasuredTree(path, {"x": Fraction(1, 2), "y": Fraction(1, 3)})
    with pytest.raises(InvalidInputError):
        MeasuredTree(cn(3), {v: Fraction(1, 3) for v in cn(3).vertices})
    with pytest.raises(InvalidInputError):
        MeasuredTree(path, {"x": Fraction(1)})


def test_thickness_of_fold(c4_fold: IndexedMorphism) -> None:
    """The fold is 1/4-thick through t1 but not 1/2-thick: y is central."""
    nu = MeasuredTree.of(c4_fold)
    assert edge_size(nu, "t1") == Fraction(1, 4)
    assert is_c_thick(nu, Fraction(1, 4)) == (True, None)
    assert find_large_edge(nu, Fraction(1, 4)) == "t1"
    assert is_c_thick(nu, Fraction(1, 2)) == (False, "y")
    assert witness_is_heavy(nu, Fraction(1, 2), "y")
    with pytest.raises(PreconditionError):
        find_large_edge(nu, Fraction(1, 2))
    with pytest.raises(InvalidInputError):
        is_c_thick(nu, Fraction(0))


def test_degree_bounds(c4_fold: IndexedMorphism) -> None:
    nu = MeasuredTree.of(c4_fold)
    assert trivial_degree_bound(nu, "y", 4) == 2
    assert cheeger_degree_bound(Fraction(2), Fraction(1, 4), 4) == 1
    assert tree_degree_bound(Fraction(2), 4, 2) == Fraction(4, 3)


def test_params_validation() -> None:
    """Floats are read through their decimal form; the sum is at most one."""
    params = RebuildParams(A=0.2, B=0.3, C=0.5)
    assert params.A == Fraction(1, 5)
    assert params.model_dump() == {"A": "1/5", "B": "3/10", "C": "1/2"}
    with pytest.raises(ValidationError):
        RebuildParams(A=Fraction(1, 2), B=Fraction(1, 2), C=Fraction(1, 2))
    with pytest.raises(ValidationError):
        RebuildParams(A=0, B=Fraction(1, 2), C=Fraction(1, 2))
    with pytest.raises(ValidationError):
        RebuildParams(A="x", B=Fraction(1, 2), C=Fraction(1, 4))


@pytest.mark.parametrize(("lam", "delta"), [(Fraction(4), 3), (Fraction(2), 2), (Fraction(1, 3), 5)])
def test_balanced_params_sum_to_one(lam: Fraction, delta: int) -> None:
    params = RebuildParams.balanced(lam, delta)
    assert params.A + params.B + params.C == 1
    assert params.B == lam / (lam + 4 * (delta + 1))


def test_greedy_split() -> None:
    """Largest first into the lighter side, ties to the left."""
    quarters = [Fraction(1, 4)] * 4
    assert split_components(quarters, Fraction(1, 4)) == ([0, 2], [1, 3])


def test_exhaustive_split_rescues_greedy() -> None:
    """Greedy gets 5/12 here; the best two-colouring gets 6/12."""
    masses = [Fraction(k, 12) for k in (3, 3, 2, 2, 2)]
    assert split_components(masses, Fraction(11, 24)) == ([0, 1], [2, 3, 4])


def test_impossible_split() -> None:
    with pytest.raises(RebuildError):
        split_components([Fraction(9, 10), Fraction(1, 10)], Fraction(1, 5))


def test_thick_tree_is_not_rebuilt(c4_fold: IndexedMorphism) -> None:
    """The culprit is the large edge."""
    with pytest.raises(PreconditionError) as excinfo:
        rebuild(c4_fold, WORKED_PARAMS)
    assert excinfo.value.culprit == "t1"
    assert excinfo.value.exit_code == 4


def test_heavy_vertex_is_not_rebuilt(c4_fold: IndexedMorphism) -> None:
    params = RebuildParams(A=Fraction(1, 10), B=Fraction(3, 10), C=Fraction(3, 5))
    with pytest.raises(PreconditionError) as excinfo:
        rebuild(c4_fold, params)
    assert excinfo.value.culprit == "y"


def test_pipeline_cases_on_fold(c4_fold: IndexedMorphism) -> None:
    """Thick: (C/4)·λ·|G| = 1. Heavy: B·|G| = 6/5."""
    thick = pipeline_bound(c4_fold, WORKED_PARAMS)
    assert thick.case == "thick"
    assert thick.value == 1
    assert thick.witness == "t1"
    heavy = pipeline_bound(
        c4_fold, RebuildParams(A=Fraction(1, 10), B=Fraction(3, 10), C=Fraction(3, 5))
    )
    assert heavy.case == "heavy"
    assert heavy.value == Fraction(6, 5)
    assert heavy.model_dump()["value"] == "6/5"


def test_worked_example_is_harmonic(worked: WorkedExample) -> None:
    """Degree 8 from a refinement of a genus 7 graph of maximum degree 5."""
    assert verify(worked.phi).degree == 8
    assert genus(worked.graph) == 7
    assert max_degree(worked.graph) == 5
    assert len(unrefine(worked.refined, worked.graph.vertices).edges) == 16


def test_worked_example_measure(worked: WorkedExample) -> None:
    measure = pushforward(worked.phi)
    assert {y: measure[y] for y in "abh"} == dict.fromkeys("abh", Fraction(1, 5))
    assert {y: measure[y] for y in "defg"} == dict.fromkeys("defg", Fraction(1, 10))
    assert measure["c"] == measure["B"] == measure["H"] == 0


def test_worked_example_has_a_unique_center(worked: WorkedExample) -> None:
    """Only a is a non-thick witness at c = 1/4, and it is heavy."""
    nu = MeasuredTree.of(worked.phi)
    assert non_thick_witnesses(nu, Fraction(1, 4)) == ["a"]
    assert witness_is_heavy(nu, Fraction(1, 4), "a")
    assert max(nu.measure.values()) < WORKED_PARAMS.B


def test_core_edges_of_worked_example(worked: WorkedExample) -> None:
    """Leaves and hanging paths are pruned; the 8 subdivided edges count twice."""
    assert len(core_edges(worked.refined, worked.graph.vertices)) == 24


def test_rebuild_worked_example(worked: WorkedExample) -> None:
    """Both central edges cut off more than A/2 of the domain; the new degree stays within Δ·deg."""
    result = rebuild(worked.phi, WORKED_PARAMS)
    summary = result.summary
    assert summary.x0 == "a"
    assert summary.size_threshold == Fraction(1, 10)
    assert summary.size_left > summary.size_threshold, f"left side {summary.size_left} is thin"
    assert summary.size_right > summary.size_threshold, f"right side {summary.size_right} is thin"
    assert max(summary.size_left, summary.size_right) <= Fraction(1, 2)
    assert summary.degree_before == 8
    assert summary.degree_cap == 40
    assert summary.degree_after <= 40
    report = verify(result.phi)
    assert report.harmonic
    assert report.degree == summary.degree_after
    for v, (left, right) in result.central_sums.items():
        assert report.m[v] == max(left, right)
        assert result.dsharp[v] == left - right
    assert len(unrefine(result.domain, result.phi.origin_vertices).edges) == 16
    sides = {c.side for c in summary.local}
    assert sides == {"L", "R"}
    dumped = summary.model_dump(mode="json")
    assert dumped["size_threshold"] == "1/10"
    assert Fraction(dumped["size_left"]) == summary.size_left


def test_pipeline_on_worked_example(worked: WorkedExample) -> None:
    """The rebuild case gives (A/(4Δ))·λ·|G|, below the degree."""
    bound = pipeline_bound(worked.phi, WORKED_PARAMS)
    assert bound.case == "rebuild"
    assert bound.degree == 8
    assert 0 < bound.value <= 8
