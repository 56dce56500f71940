"""Built-in graph families and the worked rebuild example."""

from collections.abc import Callable
from typing import NamedTuple

from gonality.errors import InvalidInputError
from gonality.graph import Edge, GraphBuilder, MultiGraph, Origin, RefinementTrace
from gonality.morphism import EdgeImage, IndexedMorphism


def _require(n: int, least: int, family: str) -> None:
    if n < least:
        raise InvalidInputError(f"{family} needs n >= {least}, got {n}")


def kn(n: int) -> MultiGraph:
    """Complete graph on vertices 1..n."""
    _require(n, 1, "K_n")
    names = [str(i) for i in range(1, n + 1)]
    pairs = [(u, v) for i, u in enumerate(names) for v in names[i + 1 :]]
    return MultiGraph.from_pairs(pairs, names)


def cn(n: int) -> MultiGraph:
    """Cycle 1-2-...-n-1."""
    _require(n, 3, "C_n")
    names = [str(i) for i in range(1, n + 1)]
    return MultiGraph.from_pairs(zip(names, names[1:] + names[:1], strict=True), names)


def knn(n: int) -> MultiGraph:
    """Complete bipartite graph with sides a1..an and b1..bn."""
    _require(n, 1, "K_{n,n}")
    left = [f"a{i}" for i in range(1, n + 1)]
    right = [f"b{i}" for i in range(1, n + 1)]
    return MultiGraph.from_pairs([(u, v) for u in left for v in right], left + right)


def bn(n: int) -> MultiGraph:
    """Banana graph: two vertices joined by n parallel edges."""
    _require(n, 1, "B_n")
    return MultiGraph.from_pairs([("a", "b")] * n)


def path(n: int) -> MultiGraph:
    """Path on n vertices."""
    _require(n, 1, "P_n")
    names = [str(i) for i in range(1, n + 1)]
    return MultiGraph.from_pairs(zip(names, names[1:], strict=False), names)


FAMILIES: dict[str, Callable[[int], MultiGraph]] = {
    "kn": kn,
    "cn": cn,
    "knn": knn,
    "bn": bn,
    "path": path,
}


def by_name(name: str, n: int | None = None) -> MultiGraph:
    """A family member by name and size, or a short name such as "k4" or "b3"."""
    if name in FAMILIES:
        if n is None:
            raise InvalidInputError(f"Family {name} needs a size")
        return FAMILIES[name](n)
    for prefix, family in (("knn", knn), ("k", kn), ("c", cn), ("b", bn), ("p", path)):
        rest = name[len(prefix) :]
        if name.startswith(prefix) and rest.isdigit():
            return family(int(rest))
    raise InvalidInputError(f"Unknown built-in graph {name!r}")


def table_corpus() -> list[tuple[str, MultiGraph]]:
    """The graphs of the invariants table, in table order."""
    corpus = [(f"K_{n}", kn(n)) for n in range(3, 7)]
    corpus += [(f"C_{n}", cn(n)) for n in range(3, 9)]
    corpus.append(("K_3,3", knn(3)))
    corpus += [(f"B_{n}", bn(n)) for n in range(2, 6)]
    return corpus


# --- Worked rebuild example ---------------------------------------------------

_G_EDGES = [
    ("1", "2"), ("1", "10"), ("2", "10"), ("2", "7"), ("2", "4"), ("2", "3"),
    ("3", "4"), ("3", "6"), ("4", "5"), ("5", "6"), ("5", "7"), ("6", "7"),
    ("7", "8"), ("7", "9"), ("8", "9"), ("8", "10"),
]  # fmt: skip

# edge id of G -> name of its subdivision point in G'
_MIDPOINTS = {
    "e2": "19", "e4": "18", "e7": "21", "e8": "22",
    "e9": "24", "e10": "23", "e15": "20", "e16": "17",
}  # fmt: skip

_TREE_EDGES = [
    ("bB", "b", "B"), ("ab", "a", "b"), ("hH", "h", "H"), ("ah", "a", "h"),
    ("ac", "a", "c"), ("ad", "a", "d"), ("ae", "a", "e"), ("af", "a", "f"),
    ("ag", "a", "g"),
]  # fmt: skip

_IMAGES = {
    "1": "b", "2": "a", "3": "d", "4": "f", "5": "g", "6": "e", "7": "a",
    "8": "h", "9": "b", "10": "h", "17": "H", "18": "c", "19": "a", "20": "a",
    "21": "a", "22": "a", "23": "a", "24": "a",
    "11": "B", "12": "B", "13": "e", "14": "g", "15": "d", "16": "f",
}  # fmt: skip

# leaf vertex -> (attachment vertex, index)
_LEAVES = {
    "11": ("1", 2), "12": ("9", 2),
    "13": ("2", 1), "14": ("2", 1), "15": ("7", 1), "16": ("7", 1),
}  # fmt: skip

# leaf material at the subdivision points over a: single leaves and b-B, h-H paths
_HANGING = {
    "19": "cdefg", "20": "cdefg",
    "21": "bhceg", "22": "bhcfg", "23": "bhcfd", "24": "bhcde",
}  # fmt: skip


class WorkedExample(NamedTuple):
    """G, its refinement G', the tree T and φ: G' → T of degree 8."""

    graph: MultiGraph
    refined: MultiGraph
    tree: MultiGraph
    phi: IndexedMorphism
    trace: RefinementTrace


def _refined_domain(graph: MultiGraph) -> tuple[GraphBuilder, dict[str, str], dict[str, int]]:
    builder = GraphBuilder()
    images = dict(_IMAGES)
    index: dict[str, int] = {}
    for v in graph.vertices:
        builder.add_vertex(v, Origin("vertex", v))
    for e in graph.edges:
        mid = _MIDPOINTS.get(e.id)
        if mid is None:
            builder.add_edge(e.u, e.v, e.id, e.id)
            continue
        builder.add_vertex(mid, Origin("edge", e.id))
        first = builder.add_edge(e.u, mid, f"{e.id}/1", e.id)
        second = builder.add_edge(mid, e.v, f"{e.id}/2", e.id)
        if images[mid] == "H":
            index[first] = index[second] = 2
    for leaf, (anchor, r) in _LEAVES.items():
        builder.add_vertex(leaf)
        index[builder.add_edge(anchor, leaf, f"{anchor}-{leaf}")] = r
    for anchor, targets in _HANGING.items():
        for t in targets:
            leaf = builder.add_vertex(f"{anchor}{t}")
            images[leaf] = t
            builder.add_edge(anchor, leaf, f"{anchor}-{leaf}")
            if t in "bh":
                tip = builder.add_vertex(f"{anchor}{t.upper()}")
                images[tip] = t.upper()
                builder.add_edge(leaf, tip, f"{leaf}-{tip}")
    return builder, images, index


def ppchange_example() -> WorkedExample:
    """
    A degree-8 morphism whose measured tree is neither thick nor heavy.

    G has 10 vertices and maximum degree 5; eight of its edges are
    subdivided once, and leaves and short paths are attached to balance the
    indices. The pushforward measure gives a, b and h mass 1/5 and d, e, f,
    g mass 1/10, so `rebuild` applies with A = 1/5, B = 3/10, C = 1/2.
    """
    graph = MultiGraph.from_pairs(_G_EDGES, [str(i) for i in range(1, 11)])
    tree = MultiGraph(
        ("a", "b", "B", "h", "H", "c", "d", "e", "f", "g"),
        tuple(Edge(eid, u, v) for eid, u, v in _TREE_EDGES),
    )
    builder, images, index = _refined_domain(graph)
    refined = builder.graph()
    by_ends = {e.ends(): e.id for e in tree.edges}
    emap = {
        e.id: EdgeImage(by_ends[frozenset((images[e.u], images[e.v]))], index.get(e.id, 1))
        for e in refined.edges
    }
    vmap = {v: images[v] for v in refined.vertices}
    phi = IndexedMorphism(refined, tree, vmap, emap, "finite", frozenset(graph.vertices))
    return WorkedExample(graph, refined, tree, phi, builder.trace(graph))
