"""Tests for divisors, q-reduction and divisorial gonality."""

import itertools
import random
from fractions import Fraction

import pytest

from gonality.chipfire import (
    Divisor,
    divisorial_gonality,
    divisorial_lower_bounds,
    fire,
    has_positive_rank,
    is_equivalent,
    q_reduce,
    reduced_divisor_key,
)
from gonality.errors import InvalidInputError, SizeCapError
from gonality.generators import bn, cn, kn, knn, path
from gonality.graph import MultiGraph, laplacian


def equivalent_by_linear_algebra(first: Divisor, second: Divisor) -> bool:
    """D1 ~ D2 iff D1 - D2 = L x for an integer x; solve the reduced system exactly."""
    if first.degree != second.degree:
        return False
    lap = laplacian(first.graph)
    n = len(first.graph.vertices)
    diff = [a - b for a, b in zip(first.chips, second.chips, strict=True)]
    if n == 1:
        return diff == [0]
    rows = [[Fraction(int(lap[i, j])) for j in range(1, n)] + [Fraction(diff[i])] for i in range(1, n)]
    size = n - 1
    for col in range(size):
        pivot = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                f = rows[r][col] / rows[col][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col], strict=True)]
    solution = [rows[i][size] / rows[i][i] for i in range(size)]
    return all(x.denominator == 1 for x in solution)


def effective_classes(graph: MultiGraph, d: int) -> list[list[Divisor]]:
    """Effective divisors of degree d, grouped into linear equivalence classes."""
    classes: list[list[Divisor]] = []
    for support in itertools.combinations_with_replacement(graph.vertices, d):
        divisor = Divisor.from_vertices(graph, support)
        for members in classes:
            if equivalent_by_linear_algebra(members[0], divisor):
                members.append(divisor)
                break
        else:
            classes.append([divisor])
    return classes


def class_has_positive_rank(graph: MultiGraph, members: list[Divisor]) -> bool:
    """Positive rank iff every vertex carries a chip in some member of the class."""
    return all(any(e[q] >= 1 for e in members) for q in graph.vertices)


def test_divisor_basics() -> None:
    g = cn(4)
    d = Divisor.from_vertices(g, ["1", "1", "3"])
    assert d.degree == 3
    assert d["1"] == 2
    assert d.is_effective()
    assert str(d) == "2*1 + 3"
    assert (d - d).degree == 0
    with pytest.raises(InvalidInputError):
        Divisor.from_mapping(g, {"9": 1})
    with pytest.raises(InvalidInputError):
        Divisor(g, (1, 2))


def test_firing_moves_one_chip_per_edge() -> None:
    """Firing a vertex of B_3 sends three chips across."""
    g = bn(3)
    d = Divisor.from_mapping(g, {"a": 3})
    fired = fire(d, ["a"])
    assert fired.as_dict() == {"b": 3}
    assert is_equivalent(d, fired)


def test_q_reduce_on_cycle() -> None:
    """On C_4, two chips at 2 and 4 are equivalent to two chips at 1 and 3."""
    g = cn(4)
    d = Divisor.from_vertices(g, ["2", "4"])
    reduced = q_reduce(d, "1")
    assert reduced["1"] >= 1
    assert is_equivalent(d, reduced)
    assert reduced_divisor_key(d, "1") == reduced.chips


def test_q_reduce_rejects_unknown_vertex() -> None:
    with pytest.raises(InvalidInputError):
        q_reduce(Divisor.from_vertices(cn(3), ["1"]), "x")


def test_positive_rank_examples() -> None:
    assert has_positive_rank(Divisor.from_vertices(cn(5), ["1", "3"]))
    assert not has_positive_rank(Divisor.from_vertices(cn(5), ["1"]))
    assert has_positive_rank(Divisor.from_vertices(bn(4), ["a", "b"]))
    assert has_positive_rank(Divisor.from_vertices(path(4), ["2"]))


@pytest.mark.parametrize(
    ("graph", "expected"),
    [
        *[(kn(n), n - 1) for n in range(3, 7)],
        *[(cn(n), 2) for n in range(3, 9)],
        (bn(4), 2),
        (knn(3), 3),
        (path(5), 1),
    ],
)
def test_divisorial_gonality(graph: MultiGraph, expected: int) -> None:
    """dgon of the standard families, with a positive-rank witness."""
    found = divisorial_gonality(graph)
    assert found is not None
    d, witness = found
    assert d == expected
    assert witness.degree == expected
    assert witness.is_effective()
    assert has_positive_rank(witness)


def test_divisorial_gonality_limits() -> None:
    assert divisorial_gonality(kn(4), max_degree=2) is None
    with pytest.raises(SizeCapError):
        divisorial_gonality(kn(5), max_vertices=4)


def test_divisorial_lower_bounds() -> None:
    assert divisorial_lower_bounds(kn(5)) == [
        ("connectivity", 4, "dgon >= min(|V|, edge connectivity)"),
        ("treewidth", 4, "dgon >= treewidth"),
    ]
    assert [value for _, value, _ in divisorial_lower_bounds(bn(5))] == [2, 2]


def test_loops_are_ignored() -> None:
    """A loop changes neither the Laplacian nor dgon."""
    looped = MultiGraph.from_pairs([("1", "2"), ("2", "3"), ("3", "1"), ("1", "1")])
    found = divisorial_gonality(looped)
    assert found is not None and found[0] == 2


def test_equivalence_matches_linear_algebra(small_random_corpus: list[MultiGraph]) -> None:
    """Reduced forms decide equivalence exactly as the integer Laplacian does."""
    rng = random.Random(7)
    for graph in small_random_corpus:
        n = len(graph.vertices)
        for _ in range(5):
            first = Divisor(graph, tuple(rng.randint(-2, 3) for _ in range(n)))
            members = [rng.randint(0, 1) for _ in range(n)]
            moved = fire(first, [v for v, m in zip(graph.vertices, members, strict=True) if m])
            other = Divisor(graph, tuple(rng.randint(-2, 3) for _ in range(n)))
            assert is_equivalent(first, moved)
            assert is_equivalent(first, other) == equivalent_by_linear_algebra(first, other)
            q = graph.vertices[-1]
            reduced = q_reduce(first, q)
            assert all(c >= 0 for v, c in zip(graph.vertices, reduced.chips, strict=True) if v != q)
            assert equivalent_by_linear_algebra(first, reduced)


SMALL_FAMILIES = [kn(2), kn(3), kn(4), kn(5), cn(3), cn(4), cn(5), bn(2), bn(3), bn(4), bn(5), knn(2)] + [
    path(n) for n in range(2, 6)
]


@pytest.mark.slow
def test_positive_rank_matches_enumeration(small_random_corpus: list[MultiGraph]) -> None:
    """Dhar-based rank agrees with brute force over effective divisors of degree 1 to 3."""
    for graph in [*small_random_corpus, *SMALL_FAMILIES]:
        assert len(graph.vertices) <= 5
        for d in (1, 2, 3):
            for members in effective_classes(graph, d):
                expected = class_has_positive_rank(graph, members)
                for divisor in members:
                    assert has_positive_rank(divisor) == expected, (
                        f"rank mismatch for {divisor} on {graph.edges}"
                    )
