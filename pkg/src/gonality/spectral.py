"""
Certified Laplacian spectral gap and the closed-form spectral bounds.

The smallest nonzero eigenvalue of L (or of the normalized operator, handled
as the similar matrix D⁻¹L) is enclosed in a rational interval. A float
eigensolver only seeds the bracket; every endpoint is certified by exact
Sylvester inertia of the symmetric rational matrix L - μB (B = I or D):
the number of negative eigenvalues of L - μB is the number of eigenvalues
of the operator below μ.

Bounds provided:
  • sgon_lower_bound             ⌈λ/(λ + 4(Δ+1)) · |G|⌉
  • sgon_lower_bound_normalized  ⌈λ~/(Δλ~ + 4(Δ+1)) · vol(G)⌉
  • bound_over_class             max of the first over enumerated refinements
  • trivial_gon_bounds           edge connectivity, and ⌈λ⌉ for simple non-complete graphs
  • brill_noether_upper          ⌊(g+3)/2⌋
  • points_degree_bound          (λ(|G|-1) - 4Δ - 4)/(2λ + 8Δ + 8)
"""

import itertools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from gonality.config import (
    CLASS_BOUND_MAX_REFINEMENTS,
    SEED_MARGIN,
    SNAP_MAX_DENOMINATOR,
    SPECTRAL_TOLERANCE,
)
from gonality.errors import InvalidInputError
from gonality.graph import (
    MultiGraph,
    attach_path,
    degree,
    edge_connectivity,
    genus,
    is_complete,
    is_simple,
    laplacian,
    max_degree,
    stable_model,
    subdivide_edges,
    volume,
)
from gonality.models import BoundEntry, BoundKind, BoundReport, GraphInfo, SearchBudget

Operator = Literal["standard", "normalized"]
Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class EigenvalueEnclosure:
    """Rational interval [lower, upper] holding the smallest nonzero eigenvalue."""

    lower: Fraction
    upper: Fraction
    target: Operator = "standard"

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __str__(self) -> str:
        if self.exact:
            return f"{self.lower}"
        return f"[{float(self.lower):.10f}, {float(self.upper):.10f}]"


def inertia(matrix: Matrix) -> tuple[int, int, int]:
    """
    Return (negative, zero, positive) eigenvalue counts of a symmetric matrix.

    Exact symmetric elimination: a nonzero diagonal entry is used as a 1×1
    pivot; when the remaining diagonal is zero, a nonzero off-diagonal
    entry b gives the 2×2 pivot [[0, b], [b, 0]] of inertia (1, 0, 1).
    """
    a = [row[:] for row in matrix]
    active = list(range(len(a)))
    neg = zero = pos = 0
    while active:
        p = next((i for i in active if a[i][i] != 0), None)
        if p is not None:
            pivot = a[p][p]
            if pivot < 0:
                neg += 1
            else:
                pos += 1
            active.remove(p)
            for i in active:
                if a[i][p] == 0:
                    continue
                f = a[i][p] / pivot
                row_p = a[p]
                row_i = a[i]
                for j in active:
                    if row_p[j] != 0:
                        row_i[j] -= f * row_p[j]
            continue
        pair = next(
            ((i, j) for i in active for j in active if i < j and a[i][j] != 0), None
        )
        if pair is None:
            zero += len(active)
            break
        i, j = pair
        b = a[i][j]
        neg += 1
        pos += 1
        active.remove(i)
        active.remove(j)
        col_i = {k: a[k][i] for k in active}
        col_j = {k: a[k][j] for k in active}
        for k in active:
            for m in active:
                a[k][m] -= (col_i[k] * col_j[m] + col_j[k] * col_i[m]) / b
    return neg, zero, pos


class _ShiftedPencil:
    """Counts eigenvalues of L or D⁻¹L relative to a rational shift μ."""

    def __init__(self, graph: MultiGraph, which: Operator) -> None:
        lap = laplacian(graph)
        n = len(graph.vertices)
        self.lap = [[Fraction(int(lap[i, j])) for j in range(n)] for i in range(n)]
        if which == "normalized":
            self.weights = [Fraction(degree(graph, v)) for v in graph.vertices]
        else:
            self.weights = [Fraction(1)] * n

    def counts(self, mu: Fraction) -> tuple[int, int]:
        """Return (#eigenvalues < mu, #eigenvalues == mu)."""
        shifted = [row[:] for row in self.lap]
        for i, w in enumerate(self.weights):
            shifted[i][i] -= mu * w
        neg, zero, _ = inertia(shifted)
        return neg, zero


def _float_seed(graph: MultiGraph, which: Operator) -> float:
    lap = laplacian(graph).astype(float)
    if which == "normalized":
        d = np.array([degree(graph, v) for v in graph.vertices], dtype=float)
        scale = 1.0 / np.sqrt(d)
        lap = scale[:, None] * lap * scale[None, :]
    eigenvalues = np.sort(np.linalg.eigvalsh(lap))
    return float(eigenvalues[1])


def lambda1(
    graph: MultiGraph,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
    which: Operator = "standard",
) -> EigenvalueEnclosure:
    """
    Enclose the smallest nonzero eigenvalue of L (or of D⁻¹L).

    The returned interval satisfies: exactly one eigenvalue (zero) lies below
    `lower`, at least two lie at or below `upper`, and the width is at most
    `tolerance`. A rational eigenvalue with small denominator is returned as
    a degenerate interval.
    """
    if len(graph.vertices) < 2:
        raise InvalidInputError("lambda1 needs at least two vertices")
    if tolerance <= 0:
        raise InvalidInputError("Tolerance must be positive")
    graph.require_connected()
    pencil = _ShiftedPencil(graph, which)
    seed = _float_seed(graph, which)

    snapped = Fraction(seed).limit_denominator(SNAP_MAX_DENOMINATOR)
    if snapped > 0:
        below, at = pencil.counts(snapped)
        if below == 1 and at >= 1:
            logging.debug("lambda1 (%s) is exactly %s", which, snapped)
            return EigenvalueEnclosure(snapped, snapped, which)

    lo = max(Fraction(seed) - SEED_MARGIN, SEED_MARGIN)
    while pencil.counts(lo)[0] > 1:
        lo /= 2
    hi = Fraction(seed) + SEED_MARGIN
    while sum(pencil.counts(hi)) < 2:
        hi = 2 * hi + SEED_MARGIN

    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        below, at = pencil.counts(mid)
        if below >= 2:
            hi = mid
        elif below + at >= 2:
            lo = hi = mid
        else:
            lo = mid
    logging.debug("lambda1 (%s) in [%s, %s]", which, float(lo), float(hi))
    return EigenvalueEnclosure(lo, hi, which)


def spectral_ratio(lam: Fraction, delta: int) -> Fraction:
    """λ/(λ + 4(Δ+1)); increasing in λ."""
    return lam / (lam + 4 * (delta + 1))


def sgon_lower_bound(graph: MultiGraph, tolerance: Fraction = SPECTRAL_TOLERANCE) -> int:
    """Certified ⌈λ/(λ + 4(Δ+1)) · |G|⌉, at least 1."""
    lam = lambda1(graph, tolerance).lower
    value = spectral_ratio(lam, max_degree(graph)) * len(graph.vertices)
    return max(1, math.ceil(value))


def sgon_lower_bound_normalized(
    graph: MultiGraph, tolerance: Fraction = SPECTRAL_TOLERANCE
) -> int:
    """Certified ⌈λ~/(Δλ~ + 4(Δ+1)) · vol(G)⌉ from the normalized operator."""
    lam = lambda1(graph, tolerance, "normalized").lower
    delta = max_degree(graph)
    value = lam / (delta * lam + 4 * (delta + 1)) * volume(graph)
    return max(1, math.ceil(value))


def _class_members(graph: MultiGraph, budget: SearchBudget) -> Iterator[MultiGraph]:
    """Refinements within the budget: subdivision vectors, then leaf-paths."""
    edge_ids = [e.id for e in graph.edges]
    for vector in itertools.product(range(budget.max_subdivisions + 1), repeat=len(edge_ids)):
        refined, _ = subdivide_edges(graph, dict(zip(edge_ids, vector, strict=True)))
        yield refined
    leaves = budget.max_leaf_paths or 0
    if budget.max_leaf_length == 0:
        return
    slots = [(v, k) for v in graph.vertices for k in range(1, budget.max_leaf_length + 1)]
    for count in range(1, leaves + 1):
        for choice in itertools.combinations_with_replacement(slots, count):
            refined = graph
            for v, k in choice:
                refined, _ = attach_path(refined, v, k)
            yield refined


def bound_over_class(
    graph: MultiGraph,
    budget: SearchBudget | None = None,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
) -> int:
    """
    Maximum of sgon_lower_bound over refinements enumerated within `budget`.

    The stable model is included when the genus is at least 2. At most
    CLASS_BOUND_MAX_REFINEMENTS refinements are evaluated.
    """
    best = sgon_lower_bound(graph, tolerance)
    if budget is None or (budget.max_subdivisions == 0 and not budget.max_leaf_paths):
        return best
    members = _class_members(graph, budget)
    if genus(graph) >= 2:
        members = itertools.chain([stable_model(graph)], members)
    evaluated = 0
    for member in members:
        if evaluated >= CLASS_BOUND_MAX_REFINEMENTS:
            logging.warning(
                "bound_over_class stopped after %d refinements", CLASS_BOUND_MAX_REFINEMENTS
            )
            break
        evaluated += 1
        best = max(best, sgon_lower_bound(member, tolerance))
    logging.info("Spectral bound over %d refinements: %d", evaluated, best)
    return best


def trivial_gon_bounds(
    graph: MultiGraph, tolerance: Fraction = SPECTRAL_TOLERANCE
) -> list[tuple[str, int]]:
    """Edge connectivity always; ⌈λ⌉ ("Fiedler") for simple non-complete graphs."""
    bounds = [("edge_connectivity", edge_connectivity(graph))]
    if is_simple(graph) and not is_complete(graph):
        bounds.append(("Fiedler", math.ceil(lambda1(graph, tolerance).lower)))
    return bounds


def brill_noether_upper(graph: MultiGraph) -> int:
    """⌊(g+3)/2⌋, asserted only for genus at least 2."""
    g = genus(graph)
    if g < 2:
        raise InvalidInputError(f"Brill–Noether bound needs genus >= 2, got {g}")
    return (g + 3) // 2


def points_degree_bound(
    graph: MultiGraph, tolerance: Fraction = SPECTRAL_TOLERANCE
) -> Fraction:
    """(λ(|G|-1) - 4Δ - 4)/(2λ + 8Δ + 8); negative means nothing is certified."""
    lam = lambda1(graph, tolerance).lower
    delta = max_degree(graph)
    n = len(graph.vertices)
    return (lam * (n - 1) - 4 * delta - 4) / (2 * lam + 8 * delta + 8)


def li_yau_ratio(sgon: int, lam: Fraction, vol: int) -> Fraction:
    """sgon/(λ·vol), the quantity a literal Li–Yau inequality would bound below."""
    return Fraction(sgon) / (lam * vol)


def graph_info(graph: MultiGraph, name: str | None = None) -> GraphInfo:
    graph.require_connected()
    return GraphInfo(
        name=name,
        vertices=len(graph.vertices),
        edges=len(graph.edges),
        genus=genus(graph),
        max_degree=max_degree(graph),
        volume=volume(graph),
        edge_connectivity=edge_connectivity(graph) if len(graph.vertices) > 1 else 0,
    )


def bound_report(
    graph: MultiGraph,
    name: str | None = None,
    normalized: bool = False,
    class_budget: SearchBudget | None = None,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
) -> BoundReport:
    """Collect the spectral and Brill–Noether bounds on sgon into a report."""
    bounds = [
        BoundEntry(
            name="spectral",
            kind=BoundKind.LOWER,
            value_exact=Fraction(sgon_lower_bound(graph, tolerance)),
            provenance="sgon >= ceil(lambda/(lambda+4(Delta+1)) |G|)",
        )
    ]
    if normalized:
        bounds.append(
            BoundEntry(
                name="spectral_normalized",
                kind=BoundKind.LOWER,
                value_exact=Fraction(sgon_lower_bound_normalized(graph, tolerance)),
                provenance="sgon >= ceil(nl/(Delta nl+4(Delta+1)) vol(G))",
            )
        )
    if class_budget is not None:
        bounds.append(
            BoundEntry(
                name="spectral_class",
                kind=BoundKind.LOWER,
                value_exact=Fraction(bound_over_class(graph, class_budget, tolerance)),
                provenance="max of the spectral bound over enumerated refinements",
            )
        )
    for label, value in trivial_gon_bounds(graph, tolerance):
        bounds.append(
            BoundEntry(
                name=label,
                kind=BoundKind.LOWER,
                target="gon",
                value_exact=Fraction(value),
                provenance="gon >= edge connectivity"
                if label == "edge_connectivity"
                else "gon >= lambda for simple non-complete graphs",
            )
        )
    if genus(graph) >= 2:
        bounds.append(
            BoundEntry(
                name="brill_noether",
                kind=BoundKind.UPPER,
                value_exact=Fraction(brill_noether_upper(graph)),
                provenance="sgon <= floor((g+3)/2)",
            )
        )
    return BoundReport(graph=graph_info(graph, name), bounds=bounds)
