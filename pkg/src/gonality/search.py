"""
Exact, budgeted search for gonality invariants with verified witnesses.

A harmonic morphism to a tree is described by a TreePartition of the domain
(the fibres over the tree vertices, whose quotient is the tree) and an
index for every non-collapsed edge. The search enumerates partitions
depth first, assigning vertices in breadth-first order and creating cells
in first-touch order, and solves the index problem of every complete
partition by branch and bound. One incumbent bound is shared by both
levels, so every improvement tightens the pruning everywhere.

Three modes:
  • strict    finite harmonic morphisms from the graph itself
  • complete  finite morphisms whose index deficits are filled by hanging
              copies of short codomain branches (leaf-paths)
  • caporaso  collapsed edges allowed inside cells (index 0), non-degenerate

Public entry points are min_finite_harmonic_degree, gon, sgon and
sgon_certify. Every witness is re-verified before it is returned.
"""

import logging
from collections import Counter
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import networkx as nx

from gonality.chipfire import divisorial_gonality, divisorial_lower_bounds
from gonality.config import (
    DGON_MAX_VERTICES,
    GON_SEED_MAX_VERTICES,
    PROGRESS_EVERY,
    SEARCH_NODE_LIMIT,
    SPECTRAL_TOLERANCE,
    TREEWIDTH_MAX_VERTICES,
)
from gonality.errors import GonalityError, InvalidInputError
from gonality.graph import (
    Edge,
    MultiGraph,
    edge_connectivity,
    genus,
    is_path_from,
    subdivide_edges,
    treewidth,
    volume,
)
from gonality.models import BoundEntry, BoundKind, BoundReport, SearchBudget
from gonality.morphism import (
    EdgeImage,
    IndexedMorphism,
    caporaso_to_finite,
    complete_deficits,
    identity_morphism,
    verify,
)
from gonality.spectral import bound_report, brill_noether_upper, sgon_lower_bound

Mode = Literal["strict", "complete", "caporaso"]
Domain = tuple[MultiGraph, frozenset[str] | None]


@dataclass(frozen=True)
class TreePartition:
    """
    Fibres of a morphism to a tree.

    Attributes
    ----------
    cells : tuple[tuple[str, ...], ...]
        Vertex sets, in first-touch order.
    tree_edges : tuple[tuple[int, int], ...]
        Pairs (i, j), i < j, of cells joined by at least one edge.

    """

    cells: tuple[tuple[str, ...], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def cell_of(self) -> dict[str, int]:
        return {v: i for i, cell in enumerate(self.cells) for v in cell}

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in self.cells]
        for a, b in self.tree_edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def quotient(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.cells)))
        g.add_edges_from(self.tree_edges)
        return g

    def is_tree(self) -> bool:
        return bool(nx.is_tree(self.quotient()))


@dataclass(frozen=True)
class LeafRule:
    """How much leaf material the complete mode may hang: count and length."""

    max_paths: int | None
    max_length: int


@dataclass
class SearchOutcome:
    """
    Result of a search: an interval for the invariant and the best witness.

    `upper` is None when no witness was found within the budget.
    `exhaustive` means the whole search space was covered, so `upper` is
    the minimum over it.
    """

    lower: int
    upper: int | None
    witness: IndexedMorphism | None
    exhaustive: bool
    nodes: int = 0
    lower_bounds: list[tuple[str, int, str]] = field(default_factory=list)
    reason: str = ""

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper


@dataclass(frozen=True)
class _Solution:
    graph: MultiGraph
    origin: frozenset[str] | None
    partition: TreePartition
    index: dict[str, int]
    degree: int


class _NodeLimitReached(Exception):
    pass


class _FloorReached(Exception):
    pass


@dataclass
class _Incumbent:
    cap: int
    floor: int
    node_limit: int
    nodes: int = 0
    best: _Solution | None = None

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise _NodeLimitReached
        if self.nodes % PROGRESS_EVERY == 0:
            best = self.best.degree if self.best else None
            logging.debug("Search: %d nodes, best %s, cap %d", self.nodes, best, self.cap)

    def offer(self, solution: _Solution) -> None:
        if solution.degree > self.cap:
            return
        self.best = solution
        self.cap = solution.degree - 1
        logging.debug("Search: degree %d found after %d nodes", solution.degree, self.nodes)
        if solution.degree <= self.floor:
            raise _FloorReached


def _bfs_order(graph: MultiGraph) -> list[str]:
    start = graph.vertices[0]
    order, seen = [start], {start}
    for v in order:
        for u in graph.neighbors(v):
            if u not in seen:
                seen.add(u)
                order.append(u)
    return order


# --- Partition enumeration ---------------------------------------------------


class _PartitionSearch:
    """Depth-first enumeration of tree partitions with load pruning."""

    def __init__(
        self, graph: MultiGraph, mode: Mode, incumbent: _Incumbent, leaves: LeafRule
    ) -> None:
        self.graph = graph
        self.mode = mode
        self.inc = incumbent
        self.leaves = leaves
        self.order = _bfs_order(graph)
        self.nbrs = {
            v: {u: graph.multiplicity(v, u) for u in graph.neighbors(v)}
            for v in graph.vertices
        }
        self.cell_of: dict[str, int] = {}
        self.cells: list[list[str]] = []
        self.adj: list[set[int]] = []
        self.edge_to: dict[str, Counter[int]] = {v: Counter() for v in graph.vertices}
        self.open_nbrs = {v: len(self.nbrs[v]) for v in graph.vertices}
        self.pairs: Counter[tuple[int, int]] = Counter()

    def partitions(self) -> Iterator[TreePartition]:
        yield from self._assign(0)

    def _assign(self, depth: int) -> Iterator[TreePartition]:
        if depth == len(self.order):
            if len(self.cells) >= 2 or len(self.order) == 1:
                yield TreePartition(
                    tuple(tuple(c) for c in self.cells), tuple(sorted(self.pairs))
                )
            return
        self.inc.tick()
        v = self.order[depth]
        touching = {self.cell_of[u] for u in self.nbrs[v] if u in self.cell_of}
        for x in self._candidates(touching):
            created = self._place(v, x)
            if self._feasible(v, x, touching):
                yield from self._assign(depth + 1)
            self._unplace(v, x, created)

    def _candidates(self, touching: set[int]) -> list[int]:
        new = len(self.cells)
        if not touching:
            return [new]
        if self.mode == "caporaso":
            pool = set(touching).union(*(self.adj[a] for a in touching))
            out = [x for x in sorted(pool) if all(a == x or a in self.adj[x] for a in touching)]
            return out + [new] if len(touching) == 1 else out
        if len(touching) == 1:
            (a,) = touching
            return [*sorted(self.adj[a]), new]
        return sorted(set.intersection(*(self.adj[a] for a in touching)))

    def _place(self, v: str, x: int) -> bool:
        created = x == len(self.cells)
        if created:
            self.cells.append([])
            self.adj.append(set())
        self.cells[x].append(v)
        self.cell_of[v] = x
        for u, k in self.nbrs[v].items():
            self.open_nbrs[u] -= 1
            if u not in self.cell_of:
                continue
            y = self.cell_of[u]
            if y == x:
                continue
            self.adj[x].add(y)
            self.adj[y].add(x)
            self.edge_to[u][x] += k
            self.edge_to[v][y] += k
            self.pairs[(min(x, y), max(x, y))] += k
        return created

    def _unplace(self, v: str, x: int, created: bool) -> None:
        for u, k in self.nbrs[v].items():
            self.open_nbrs[u] += 1
            if u not in self.cell_of or u == v:
                continue
            y = self.cell_of[u]
            if y == x:
                continue
            key = (min(x, y), max(x, y))
            self.pairs[key] -= k
            if not self.pairs[key]:
                del self.pairs[key]
                self.adj[x].discard(y)
                self.adj[y].discard(x)
            for w, c in ((u, x), (v, y)):
                self.edge_to[w][c] -= k
                if not self.edge_to[w][c]:
                    del self.edge_to[w][c]
        self.edge_to[v].clear()
        del self.cell_of[v]
        self.cells[x].pop()
        if created:
            self.cells.pop()
            for y in self.adj.pop():
                self.adj[y].discard(x)

    def _load(self, x: int) -> int:
        return sum(max(1, max(self.edge_to[w].values(), default=0)) for w in self.cells[x])

    def _closed_ok(self, w: str) -> bool:
        return set(self.edge_to[w]) == self.adj[self.cell_of[w]]

    def _feasible(self, v: str, x: int, touching: set[int]) -> bool:
        cap = self.inc.cap
        affected = {x, *touching}
        if any(self._load(c) > cap for c in affected):
            return False
        if any(self.pairs.get((min(x, y), max(x, y)), 0) > cap for y in touching):
            return False
        closed = [w for c in affected for w in self.cells[c] if self.open_nbrs[w] == 0]
        if self.mode != "complete":
            return all(self._closed_ok(w) for w in closed)
        if self.leaves.max_paths is None:
            return True
        forced = sum(
            len(self.adj[self.cell_of[w]]) - len(self.edge_to[w])
            for w in self.cell_of
            if self.open_nbrs[w] == 0
        )
        return forced <= self.leaves.max_paths


# --- Index assignment ---------------------------------------------------------


class _IndexSearch:
    """Branch and bound over edge indices for one partition."""

    def __init__(
        self,
        graph: MultiGraph,
        origin: frozenset[str] | None,
        partition: TreePartition,
        order: list[str],
        mode: Mode,
        incumbent: _Incumbent,
        leaves: LeafRule,
    ) -> None:
        self.graph = graph
        self.origin = origin
        self.partition = partition
        self.mode = mode
        self.inc = incumbent
        self.leaves = leaves
        self.cell_of = partition.cell_of
        self.adj = partition.adjacency()
        cell_of = self.cell_of
        pos = {v: i for i, v in enumerate(order)}

        def rank(e: Edge) -> tuple[int, int, str]:
            a, b = sorted((pos[e.u], pos[e.v]))
            return b, a, e.id

        crossing = [e for e in graph.edges if cell_of[e.u] != cell_of[e.v]]
        self.edges = sorted(crossing, key=rank)
        self.collapsed = [e.id for e in graph.edges if cell_of[e.u] == cell_of[e.v]]
        self.dirs = {v: sorted(self.adj[cell_of[v]]) for v in graph.vertices}
        self.sums: dict[tuple[str, int], int] = {}
        self.open: dict[tuple[str, int], int] = {}
        for v, ds in self.dirs.items():
            for c in ds:
                self.sums[(v, c)] = 0
                self.open[(v, c)] = 0
        self.fiber: Counter[tuple[int, int]] = Counter()
        for e in self.edges:
            cu, cv = cell_of[e.u], cell_of[e.v]
            self.open[(e.u, cv)] += 1
            self.open[(e.v, cu)] += 1
            self.fiber[(min(cu, cv), max(cu, cv))] += 1
        self.mlb = {v: self._mlb(v) for v in graph.vertices}
        self.load = [sum(self.mlb[v] for v in cell) for cell in partition.cells]
        self.index: dict[str, int] = dict.fromkeys(self.collapsed, 0)
        self.reach: dict[tuple[int, int], int | None] = {}
        self.certain = dict.fromkeys(graph.vertices, 0)
        if mode == "complete":
            self.toward = self._toward_first_edge()
            for v in graph.vertices:
                self.certain[v] = self._certain_deficits(v)

    def _mlb(self, v: str) -> int:
        return max(
            [1, *(self.sums[(v, c)] + self.open[(v, c)] for c in self.dirs[v])]
        )

    def _branch_length(self, x: int, c: int) -> int | None:
        """Length of the branch beyond c seen from x, if it is a path."""
        if (x, c) not in self.reach:
            rest = [z for z in self.adj[c] if z != x]
            if not rest:
                self.reach[(x, c)] = 1
            elif len(rest) == 1:
                inner = self._branch_length(c, rest[0])
                self.reach[(x, c)] = None if inner is None else inner + 1
            else:
                self.reach[(x, c)] = None
        return self.reach[(x, c)]

    def _may_hang(self, v: str, c: int) -> bool:
        length = self._branch_length(self.cell_of[v], c)
        return length is not None and length <= self.leaves.max_length

    def _toward_first_edge(self) -> dict[int, int]:
        a, b = self.partition.tree_edges[0]
        toward = {a: b, b: a}
        frontier = [a, b]
        while frontier:
            nxt = []
            for x in frontier:
                for y in self.adj[x]:
                    if y not in toward:
                        toward[y] = x
                        nxt.append(y)
            frontier = nxt
        return toward

    def _certain_deficits(self, v: str) -> int:
        """Closed directions at v whose sum already falls short; -1 if one cannot be filled."""
        count = 0
        for c in self.dirs[v]:
            key = (v, c)
            if self.open[key] == 0 and self.sums[key] < self.mlb[v]:
                if not self._may_hang(v, c):
                    return -1
                count += 1
        return count

    def run(self) -> None:
        if self.mode != "complete":
            if any(n == 0 for n in self.open.values()):
                return
        elif any(n < 0 for n in self.certain.values()):
            return
        if max(self.load) > self.inc.cap or max(self.fiber.values()) > self.inc.cap:
            return
        self._dfs(0)

    def _window(self, v: str, c: int, lo: int, hi: int) -> tuple[int, int]:
        """Tighten the index range of the next edge at v in direction c."""
        key = (v, c)
        closed = [self.sums[(v, d)] for d in self.dirs[v] if d != c and self.open[(v, d)] == 0]
        if not closed:
            return lo, hi
        target = closed[0]
        remaining = self.open[key] - 1
        hi = min(hi, target - self.sums[key] - remaining)
        if remaining == 0:
            lo = max(lo, target - self.sums[key])
        return lo, hi

    def _consistent(self, v: str) -> bool:
        closed = {self.sums[(v, d)] for d in self.dirs[v] if self.open[(v, d)] == 0}
        if len(closed) > 1:
            return False
        if closed:
            (target,) = closed
            return all(
                self.sums[(v, d)] + self.open[(v, d)] <= target for d in self.dirs[v]
            )
        return True

    def _dfs(self, i: int) -> None:
        self.inc.tick()
        if i == len(self.edges):
            self._evaluate()
            return
        e = self.edges[i]
        cu, cv = self.cell_of[e.u], self.cell_of[e.v]
        lo, hi = 1, self.inc.cap
        if self.mode != "complete":
            lo, hi = self._window(e.u, cv, lo, hi)
            lo, hi = self._window(e.v, cu, lo, hi)
        for r in range(lo, hi + 1):
            if r > self.inc.cap:
                break
            saved = self._apply(e, cu, cv, r)
            outcome = self._check(e, cu, cv)
            if outcome == "ok":
                self._dfs(i + 1)
            self._revert(e, cu, cv, r, saved)
            if outcome == "break":
                break

    def _apply(self, e: Edge, cu: int, cv: int, r: int) -> tuple[int, int, int, int]:
        saved = (self.mlb[e.u], self.mlb[e.v], self.certain[e.u], self.certain[e.v])
        for v, c in ((e.u, cv), (e.v, cu)):
            self.sums[(v, c)] += r
            self.open[(v, c)] -= 1
        self.fiber[(min(cu, cv), max(cu, cv))] += r - 1
        self.index[e.id] = r
        for v, c in ((e.u, cu), (e.v, cv)):
            new = self._mlb(v)
            self.load[c] += new - self.mlb[v]
            self.mlb[v] = new
        if self.mode == "complete":
            self.certain[e.u] = self._certain_deficits(e.u)
            self.certain[e.v] = self._certain_deficits(e.v)
        return saved

    def _revert(self, e: Edge, cu: int, cv: int, r: int, saved: tuple[int, int, int, int]) -> None:
        for v, c in ((e.u, cv), (e.v, cu)):
            self.sums[(v, c)] -= r
            self.open[(v, c)] += 1
        self.fiber[(min(cu, cv), max(cu, cv))] -= r - 1
        del self.index[e.id]
        mu, mv, du, dv = saved
        self.load[cu] += mu - self.mlb[e.u]
        self.mlb[e.u] = mu
        self.load[cv] += mv - self.mlb[e.v]
        self.mlb[e.v] = mv
        self.certain[e.u], self.certain[e.v] = du, dv

    def _check(self, e: Edge, cu: int, cv: int) -> str:
        cap = self.inc.cap
        if self.load[cu] > cap or self.load[cv] > cap:
            return "break"
        if self.fiber[(min(cu, cv), max(cu, cv))] > cap:
            return "break"
        if self.mode != "complete":
            ok = self._consistent(e.u) and self._consistent(e.v)
            return "ok" if ok else "skip"
        if self.certain[e.u] < 0 or self.certain[e.v] < 0:
            return "skip"
        if self.leaves.max_paths is not None:
            if sum(self.certain.values()) > self.leaves.max_paths:
                return "skip"
        return "ok"

    def _evaluate(self) -> None:
        cells = self.partition.cells
        if self.mode != "complete":
            m = {v: self.sums[(v, self.dirs[v][0])] for v in self.graph.vertices}
            totals = {sum(m[v] for v in cell) for cell in cells}
            if len(totals) != 1:
                logging.debug("Unbalanced fibres %s; skipped", totals)
                return
            degree = totals.pop()
        else:
            degree = self.fiber[self.partition.tree_edges[0]]
            hung = 0
            for v in self.graph.vertices:
                m = max(self.sums[(v, c)] for c in self.dirs[v])
                for c in self.dirs[v]:
                    k = m - self.sums[(v, c)]
                    if k == 0:
                        continue
                    if not self._may_hang(v, c):
                        return
                    hung += 1
                    if c == self.toward[self.cell_of[v]]:
                        degree += k
            if self.leaves.max_paths is not None and hung > self.leaves.max_paths:
                return
        self.inc.offer(
            _Solution(self.graph, self.origin, self.partition, dict(self.index), degree)
        )


# --- Drivers -------------------------------------------------------------------

def _search(
    domains: Iterable[Domain], mode: Mode, incumbent: _Incumbent, leaves: LeafRule
) -> bool:
    """Run the search over every domain; False when the node limit interrupted it."""
    try:
        for graph, origin in domains:
            order = _bfs_order(graph)
            for partition in _PartitionSearch(graph, mode, incumbent, leaves).partitions():
                _IndexSearch(graph, origin, partition, order, mode, incumbent, leaves).run()
    except _FloorReached:
        return True
    except _NodeLimitReached:
        logging.warning("Search stopped at the node limit (%d)", incumbent.node_limit)
        return False
    return True


def _minimize(
    domains: Callable[[], Iterable[Domain]],
    mode: Mode,
    floor: int,
    ceiling: int,
    node_limit: int,
    leaves: LeafRule,
) -> tuple[_Incumbent, bool, int]:
    """
    Least degree in [floor, ceiling] over all domains.

    Caps grow geometrically from the floor; each round is a complete branch
    and bound. Returns the incumbent, whether the last round finished, and
    the largest degree proven impossible plus one.
    """
    incumbent = _Incumbent(cap=floor, floor=floor, node_limit=node_limit)
    proven = floor
    cap = min(floor, ceiling)
    while True:
        incumbent.cap = cap
        finished = _search(domains(), mode, incumbent, leaves)
        if incumbent.best is not None or not finished:
            return incumbent, finished, proven
        proven = cap + 1
        if cap >= ceiling:
            return incumbent, True, proven
        cap = min(ceiling, max(2 * cap, cap + 1))
        logging.info("No %s morphism of degree < %d; raising the cap to %d", mode, proven, cap)


def _build_witness(solution: _Solution, mode: Mode) -> IndexedMorphism:
    """Turn a search solution into a verified morphism."""
    graph, partition = solution.graph, solution.partition
    cell_of = partition.cell_of
    tree_names = {pair: f"t{k}" for k, pair in enumerate(partition.tree_edges, start=1)}
    tree = MultiGraph(
        tuple(f"y{i}" for i in range(len(partition.cells))),
        tuple(Edge(name, f"y{a}", f"y{b}") for (a, b), name in tree_names.items()),
    )
    vmap = {v: f"y{cell_of[v]}" for v in graph.vertices}
    emap: dict[str, EdgeImage] = {}
    for e in graph.edges:
        cu, cv = cell_of[e.u], cell_of[e.v]
        if cu == cv:
            emap[e.id] = EdgeImage(f"y{cu}", 0)
        else:
            emap[e.id] = EdgeImage(tree_names[(min(cu, cv), max(cu, cv))], solution.index[e.id])
    if mode == "complete":
        phi, _ = complete_deficits(graph, tree, vmap, emap, solution.origin)
    else:
        variant = "caporaso" if mode == "caporaso" else "finite"
        phi = IndexedMorphism(graph, tree, vmap, emap, variant, solution.origin)
    report = verify(phi)
    if not report.harmonic or report.degree != solution.degree:
        raise GonalityError(
            f"Search produced an invalid witness (claimed degree {solution.degree}, "
            f"verified {report.degree}, violations {report.violations[:3]})"
        )
    return phi


def _require_loopless(graph: MultiGraph) -> None:
    graph.require_connected()
    if graph.has_loops:
        raise InvalidInputError("This search needs a loopless graph")


def _single_vertex(graph: MultiGraph) -> SearchOutcome:
    return SearchOutcome(1, 1, identity_morphism(graph), True, lower_bounds=[("trivial", 1, "")])


def min_finite_harmonic_degree(
    graph: MultiGraph,
    max_degree: int | None = None,
    node_limit: int = SEARCH_NODE_LIMIT,
) -> SearchOutcome:
    """
    Minimal degree of a finite harmonic morphism from G itself to a tree.

    Without `max_degree` the search horizon is vol(G). An exhaustive run
    returns an exact value; an empty exhaustive run reports infeasibility
    up to the horizon.
    """
    _require_loopless(graph)
    if len(graph.vertices) == 1:
        return _single_vertex(graph)
    floor = 2 if genus(graph) >= 1 else 1
    ceiling = max_degree if max_degree is not None else max(volume(graph), floor)
    leaves = LeafRule(0, 0)
    incumbent, finished, proven = _minimize(
        lambda: [(graph, None)], "strict", floor, ceiling, node_limit, leaves
    )
    return _outcome(incumbent, finished, proven, "strict", ceiling, [("genus", floor, "")])


def _outcome(
    incumbent: _Incumbent,
    finished: bool,
    proven: int,
    mode: Mode,
    ceiling: int,
    lower_bounds: list[tuple[str, int, str]],
) -> SearchOutcome:
    best = incumbent.best
    if best is None:
        reason = (
            f"no {mode} morphism of degree <= {ceiling}"
            if finished
            else f"node limit reached; none of degree < {proven}"
        )
        return SearchOutcome(proven, None, None, finished, incumbent.nodes, lower_bounds, reason)
    witness = _build_witness(best, mode)
    lower = best.degree if finished else proven
    return SearchOutcome(lower, best.degree, witness, finished, incumbent.nodes, lower_bounds)


def gon(graph: MultiGraph, node_limit: int = SEARCH_NODE_LIMIT) -> SearchOutcome:
    """
    Caporaso gonality: least degree of a non-degenerate harmonic morphism to a tree.

    Edges inside a fibre are collapsed with index 0; the tree has at least
    one edge when G has at least two vertices. The search starts from
    max(edge connectivity, 2 for positive genus).
    """
    _require_loopless(graph)
    if len(graph.vertices) == 1:
        return _single_vertex(graph)
    eta = edge_connectivity(graph)
    bounds = [("edge_connectivity", eta, "gon >= edge connectivity")]
    if genus(graph) >= 1:
        bounds.append(("genus", 2, "gon >= 2 for positive genus"))
    floor = max(b for _, b, _ in bounds)
    ceiling = max(volume(graph), floor)
    incumbent, finished, proven = _minimize(
        lambda: [(graph, None)], "caporaso", floor, ceiling, node_limit, LeafRule(0, 0)
    )
    return _outcome(incumbent, finished, proven, "caporaso", ceiling, bounds)


# --- Stable gonality -----------------------------------------------------------


def _compositions(total: int, parts: int, cap: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(max(0, total - cap * (parts - 1)), min(cap, total) + 1):
        for rest in _compositions(total - first, parts - 1, cap):
            yield (first, *rest)


def subdivision_vectors(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    """Uniform vectors 0..cap first, then the rest by total and lexicographically."""
    for k in range(cap + 1):
        yield (k,) * n
    for total in range(1, n * cap + 1):
        for vec in _compositions(total, n, cap):
            if len(set(vec)) > 1:
                yield vec


def _loops_subdivided(graph: MultiGraph) -> MultiGraph:
    loops = {e.id: 1 for e in graph.edges if e.is_loop}
    if not loops:
        return graph
    base, _ = subdivide_edges(graph, loops)
    return base


def sgon_lower_bounds(
    graph: MultiGraph, tolerance: Fraction = SPECTRAL_TOLERANCE
) -> list[tuple[str, int, str]]:
    """Lower bounds on sgon: spectral, treewidth and genus."""
    bounds = [
        (
            "spectral",
            sgon_lower_bound(graph, tolerance),
            "sgon >= ceil(lambda/(lambda+4(Delta+1)) |G|)",
        )
    ]
    if len(graph.vertices) <= TREEWIDTH_MAX_VERTICES:
        bounds.append(
            ("treewidth", treewidth(graph), "sgon >= dgon of a refinement >= treewidth")
        )
    else:
        logging.info("Treewidth bound skipped above %d vertices", TREEWIDTH_MAX_VERTICES)
    if genus(graph) >= 1:
        bounds.append(("genus", 2, "sgon >= 2 for positive genus"))
    return bounds


def _gon_seed(
    base: MultiGraph, origin: frozenset[str], budget: SearchBudget
) -> IndexedMorphism | None:
    """A gon witness made finite, when it fits the refinement budget."""
    if len(base.vertices) > GON_SEED_MAX_VERTICES:
        return None
    outcome = gon(base, budget.node_limit)
    if outcome.witness is None:
        return None
    seeded = IndexedMorphism(
        outcome.witness.domain,
        outcome.witness.codomain,
        outcome.witness.vmap,
        outcome.witness.emap,
        "caporaso",
        origin,
    )
    collapsed = sum(1 for image in seeded.emap.values() if image.index == 0)
    finite, attachments = caporaso_to_finite(seeded)
    short_paths = all(
        is_path_from(a.branch, finite.vmap[a.vertex])
        and len(a.branch.edges) <= budget.max_leaf_length
        for a in attachments
    )
    fits = (
        (collapsed == 0 or budget.max_subdivisions >= 1)
        and short_paths
        and (budget.max_leaf_paths is None or len(attachments) <= budget.max_leaf_paths)
    )
    if not fits:
        logging.info(
            "gon witness needs %d leaves and %d subdivisions; outside the budget",
            len(attachments),
            collapsed,
        )
        return None
    return finite


def sgon(
    graph: MultiGraph,
    budget: SearchBudget | None = None,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
) -> SearchOutcome:
    """
    Stable gonality within a refinement budget.

    The lower end is the best of the spectral, treewidth and genus bounds.
    The upper end starts from the gon witness made finite (when it fits the
    budget) and is improved by searching every subdivision vector of at
    most `budget.max_subdivisions` points per edge, with leaf-paths hung
    where indices fall short. Loops are subdivided once beforehand.
    """
    graph.require_connected()
    budget = budget or SearchBudget()
    base = _loops_subdivided(graph)
    origin = frozenset(graph.vertices)
    if genus(graph) == 0:
        return SearchOutcome(1, 1, identity_morphism(graph), True, lower_bounds=[("tree", 1, "")])

    bounds = sgon_lower_bounds(base, tolerance)
    floor = max(b for _, b, _ in bounds)
    seed = _gon_seed(base, origin, budget)
    seed_degree = verify(seed).degree if seed is not None else None
    if seed_degree is not None and seed_degree <= floor:
        logging.info("sgon = %d, certified by the gon witness", seed_degree)
        return SearchOutcome(seed_degree, seed_degree, seed, True, 0, bounds)

    ceiling_parts = [volume(base)]
    if budget.max_degree is not None:
        ceiling_parts.append(budget.max_degree)
    elif genus(graph) >= 2:
        ceiling_parts.append(brill_noether_upper(graph))
    if seed_degree is not None:
        ceiling_parts.append(seed_degree - 1)
    ceiling = min(ceiling_parts)

    edge_ids = [e.id for e in base.edges]

    def domains() -> Iterator[Domain]:
        for vector in subdivision_vectors(len(edge_ids), budget.max_subdivisions):
            refined, _ = subdivide_edges(base, dict(zip(edge_ids, vector, strict=True)))
            yield refined, origin

    mode: Mode = "complete" if budget.allows_leaves() else "strict"
    leaves = LeafRule(budget.max_leaf_paths, budget.max_leaf_length)
    if ceiling < floor:
        incumbent, finished = _Incumbent(ceiling, floor, budget.node_limit), True
    else:
        incumbent, finished, _ = _minimize(
            domains, mode, floor, ceiling, budget.node_limit, leaves
        )

    if incumbent.best is not None:
        witness: IndexedMorphism | None = _build_witness(incumbent.best, mode)
        upper: int | None = incumbent.best.degree
    else:
        witness, upper = seed, seed_degree
    outcome = SearchOutcome(floor, upper, witness, finished, incumbent.nodes, bounds)
    if upper is None:
        outcome.reason = "no finite harmonic morphism within the refinement budget"
    logging.info("sgon in [%d, %s] after %d nodes", floor, upper, incumbent.nodes)
    return outcome


def sgon_certify(
    graph: MultiGraph,
    budget: SearchBudget | None = None,
    tolerance: Fraction = SPECTRAL_TOLERANCE,
    name: str | None = None,
) -> BoundReport:
    """Spectral, Brill–Noether, search and divisorial results in one report."""
    report = bound_report(graph, name, normalized=True, tolerance=tolerance)
    outcome = sgon(graph, budget, tolerance)
    entries = list(report.bounds)
    for label, value, provenance in outcome.lower_bounds:
        if label != "spectral":
            entries.append(
                BoundEntry(
                    name=label,
                    kind=BoundKind.LOWER,
                    value_exact=Fraction(value),
                    provenance=provenance,
                )
            )
    if outcome.upper is not None:
        entries.append(
            BoundEntry(
                name="search",
                kind=BoundKind.UPPER,
                value_exact=Fraction(outcome.upper),
                provenance="verified finite harmonic morphism from a refinement",
            )
        )
    found = divisorial_gonality(graph) if len(graph.vertices) <= DGON_MAX_VERTICES else None
    if found is not None:
        for kind in (BoundKind.LOWER, BoundKind.UPPER):
            entries.append(
                BoundEntry(
                    name="dgon",
                    kind=kind,
                    target="dgon",
                    value_exact=Fraction(found[0]),
                    provenance="least degree of a positive-rank divisor",
                )
            )
    else:
        for label, value, provenance in divisorial_lower_bounds(graph):
            entries.append(
                BoundEntry(
                    name=label,
                    kind=BoundKind.LOWER,
                    target="dgon",
                    value_exact=Fraction(value),
                    provenance=provenance,
                )
            )
    return BoundReport(
        graph=report.graph,
        bounds=entries,
        status="exact" if outcome.exact else "interval",
        witness=outcome.witness,
    )


def enumerate_partitions(graph: MultiGraph, mode: Mode = "strict") -> list[TreePartition]:
    """All tree partitions of a small loopless graph, before any degree pruning."""
    _require_loopless(graph)
    cap = len(graph.vertices) + volume(graph)
    incumbent = _Incumbent(cap=cap, floor=0, node_limit=SEARCH_NODE_LIMIT)
    search = _PartitionSearch(graph, mode, incumbent, LeafRule(None, 0))
    return list(search.partitions())
