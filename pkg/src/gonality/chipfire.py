"""
Chip-firing on multigraphs: divisors, reduction and divisorial gonality.

A divisor assigns an integer number of chips to every vertex. Firing a
set S moves one chip along every edge leaving S; two divisors are
equivalent when one is reached from the other by firings. The
q-reduced representative of a class is found in two stages: chips are
first pushed outward from q until every other vertex is out of debt, then
Dhar's burning algorithm fires the largest legal set until the whole
graph burns. A divisor has positive rank when every vertex can be given a
chip, i.e. its q-reduced form has a chip on q for every q.

Loops carry no chips and are ignored throughout.
"""

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from gonality.config import TREEWIDTH_MAX_VERTICES
from gonality.errors import InvalidInputError, SizeCapError
from gonality.graph import MultiGraph, edge_connectivity, laplacian, treewidth


@dataclass(frozen=True, eq=False)
class Divisor:
    """Chips on the vertices of a graph, stored in vertex order."""

    graph: MultiGraph
    chips: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.chips) != len(self.graph.vertices):
            raise InvalidInputError(
                f"Divisor has {len(self.chips)} entries for {len(self.graph.vertices)} vertices"
            )

    @classmethod
    def from_mapping(cls, graph: MultiGraph, chips: Mapping[str, int]) -> "Divisor":
        unknown = [v for v in chips if not graph.has_vertex(v)]
        if unknown:
            raise InvalidInputError(f"Chips on unknown vertices: {unknown}")
        return cls(graph, tuple(int(chips.get(v, 0)) for v in graph.vertices))

    @classmethod
    def from_vertices(cls, graph: MultiGraph, vertices: Iterable[str]) -> "Divisor":
        """One chip per occurrence of a vertex."""
        counts: dict[str, int] = {}
        for v in vertices:
            counts[v] = counts.get(v, 0) + 1
        return cls.from_mapping(graph, counts)

    @cached_property
    def degree(self) -> int:
        return sum(self.chips)

    def __getitem__(self, v: str) -> int:
        return self.chips[self.graph.position[v]]

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.chips)

    def as_dict(self) -> dict[str, int]:
        return {v: c for v, c in zip(self.graph.vertices, self.chips, strict=True) if c}

    def __add__(self, other: "Divisor") -> "Divisor":
        pairs = zip(self.chips, other.chips, strict=True)
        return Divisor(self.graph, tuple(a + b for a, b in pairs))

    def __sub__(self, other: "Divisor") -> "Divisor":
        pairs = zip(self.chips, other.chips, strict=True)
        return Divisor(self.graph, tuple(a - b for a, b in pairs))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor):
            return False
        return self.graph is other.graph and self.chips == other.chips

    def __hash__(self) -> int:
        return hash(self.chips)

    def __str__(self) -> str:
        return " + ".join(f"{c}*{v}" if c != 1 else v for v, c in self.as_dict().items()) or "0"


class _Firing:
    """Laplacian and BFS layers of one graph, shared by repeated reductions."""

    def __init__(self, graph: MultiGraph) -> None:
        self.graph = graph
        self.lap = laplacian(graph)
        self.n = len(graph.vertices)
        self.simple = nx.Graph(graph.to_networkx())
        self.adjacency = -self.lap
        np.fill_diagonal(self.adjacency, 0)

    def fire(self, chips: np.ndarray, members: np.ndarray, times: int = 1) -> np.ndarray:
        """Fire the vertex set given by the 0/1 vector `members`, `times` times."""
        return chips - times * (self.lap @ members)

    def out_degrees(self, members: np.ndarray) -> np.ndarray:
        """Edges from each member to the complement of the set."""
        return (self.lap @ members) * members

    def layers(self, q: str) -> list[list[int]]:
        dist = nx.single_source_shortest_path_length(self.simple, q)
        pos = self.graph.position
        out: list[list[int]] = [[] for _ in range(max(dist.values()) + 1)]
        for v, d in dist.items():
            out[d].append(pos[v])
        return out

    def positive_rank(self, chips: np.ndarray) -> bool:
        pos = self.graph.position
        return all(self.reduce(chips, q)[pos[q]] >= 1 for q in self.graph.vertices)

    def reduce(self, chips: np.ndarray, q: str) -> np.ndarray:
        qi = self.graph.position[q]
        chips = self._out_of_debt(chips.copy(), q)
        while True:
            unburnt = self._burn(chips, qi)
            if not unburnt.any():
                return chips
            out = self.out_degrees(unburnt)
            movable = [chips[i] // out[i] for i in range(self.n) if out[i] > 0]
            chips = self.fire(chips, unburnt, max(1, min(movable)))

    def _out_of_debt(self, chips: np.ndarray, q: str) -> np.ndarray:
        """Fire balls around q until every vertex except q is out of debt."""
        layers = self.layers(q)
        ball = np.zeros(self.n, dtype=np.int64)
        balls = []
        for layer in layers:
            ball = ball.copy()
            ball[layer] = 1
            balls.append(ball)
        for k in range(len(layers) - 1, 0, -1):
            debt = max(0, -int(chips[layers[k]].min()))
            if debt:
                chips = self.fire(chips, balls[k - 1], debt)
        return chips

    def _burn(self, chips: np.ndarray, qi: int) -> np.ndarray:
        """Dhar's burning from q; returns the 0/1 vector of unburnt vertices."""
        burning = np.zeros(self.n, dtype=bool)
        burning[qi] = True
        changed = True
        while changed:
            changed = False
            threat = self.adjacency[:, burning].sum(axis=1)
            catch = (~burning) & (threat > chips)
            if catch.any():
                burning |= catch
                changed = True
        return (~burning).astype(np.int64)


def fire(divisor: Divisor, vertices: Iterable[str], times: int = 1) -> Divisor:
    """Fire a vertex set: every vertex in it sends one chip along each edge leaving it."""
    members = np.zeros(len(divisor.graph.vertices), dtype=np.int64)
    for v in vertices:
        members[divisor.graph.position[v]] = 1
    chips = _Firing(divisor.graph).fire(np.array(divisor.chips, dtype=np.int64), members, times)
    return Divisor(divisor.graph, tuple(int(c) for c in chips))


def q_reduce(divisor: Divisor, q: str) -> Divisor:
    """The q-reduced divisor equivalent to `divisor`."""
    divisor.graph.require_connected()
    if not divisor.graph.has_vertex(q):
        raise InvalidInputError(f"Unknown vertex {q!r}")
    chips = _Firing(divisor.graph).reduce(np.array(divisor.chips, dtype=np.int64), q)
    return Divisor(divisor.graph, tuple(int(c) for c in chips))


def reduced_divisor_key(divisor: Divisor, q: str | None = None) -> tuple[int, ...]:
    """Chips of the q-reduced form; equal keys mean equivalent divisors."""
    return q_reduce(divisor, q if q is not None else divisor.graph.vertices[0]).chips


def is_equivalent(first: Divisor, second: Divisor) -> bool:
    """Linear equivalence, decided by comparing reduced forms at one vertex."""
    if first.degree != second.degree:
        return False
    return reduced_divisor_key(first) == reduced_divisor_key(second)


def has_positive_rank(divisor: Divisor) -> bool:
    """True when D - q is equivalent to an effective divisor for every vertex q."""
    divisor.graph.require_connected()
    return _Firing(divisor.graph).positive_rank(np.array(divisor.chips, dtype=np.int64))


def _candidates(graph: MultiGraph, d: int) -> Iterator[Divisor]:
    for support in itertools.combinations_with_replacement(graph.vertices, d):
        yield Divisor.from_vertices(graph, support)


def divisorial_gonality(
    graph: MultiGraph, max_degree: int | None = None, max_vertices: int | None = None
) -> tuple[int, Divisor] | None:
    """
    Least degree of an effective divisor of positive rank, with one such divisor.

    Degrees 1 .. max_degree (default |V|, which always suffices) are tried in
    turn; candidates are grouped by their reduced form at the first vertex so
    every class is tested once. Returns None when max_degree is too small.
    """
    graph.require_connected()
    if max_vertices is not None and len(graph.vertices) > max_vertices:
        raise SizeCapError(f"Divisorial gonality is capped at {max_vertices} vertices")
    limit = max_degree if max_degree is not None else len(graph.vertices)
    firing = _Firing(graph)
    base = graph.vertices[0]
    for d in range(1, limit + 1):
        seen: set[tuple[int, ...]] = set()
        for candidate in _candidates(graph, d):
            chips = np.array(candidate.chips, dtype=np.int64)
            key = tuple(int(c) for c in firing.reduce(chips, base))
            if key in seen or key[0] < 1:
                continue
            seen.add(key)
            if firing.positive_rank(chips):
                logging.info("dgon = %d, witnessed by %s", d, candidate)
                return d, candidate
        logging.debug("No positive-rank divisor of degree %d (%d classes)", d, len(seen))
    return None


def divisorial_lower_bounds(graph: MultiGraph) -> list[tuple[str, int, str]]:
    """dgon ≥ min(|V|, η) and, below the treewidth cap, dgon ≥ tw."""
    graph.require_connected()
    n = len(graph.vertices)
    eta = edge_connectivity(graph) if n > 1 else 0
    bounds = [("connectivity", max(1, min(n, eta)), "dgon >= min(|V|, edge connectivity)")]
    if n <= TREEWIDTH_MAX_VERTICES:
        bounds.append(("treewidth", max(1, treewidth(graph)), "dgon >= treewidth"))
    return bounds
