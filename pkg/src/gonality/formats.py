"""
Text formats for graphs and morphisms, and DOT export.

Graph file (UTF-8):

    # comment
    v a            declare a vertex (fixes its place in the vertex order)
    a b            one edge per line; a loop is "a a"; repeat for parallels

Vertex order is order of first occurrence, edge ids are e1, e2, ... in file
order. The word `v` is reserved as the declaration keyword. The graph must
be connected.

Morphism file:

    [domain] G.graph
    [codomain] T.graph
    [origin]
    a b c
    [vmap]
    a -> x
    [emap]
    e1 -> f2 : 3
    e4 -> x : 0

Codomain edges are referenced as f1, f2, ... so they cannot be confused with
domain edges; index 0 collapses an edge onto a vertex. Paths are relative
to the morphism file.
"""

import logging
import re
from collections.abc import Iterator, Mapping
from pathlib import Path

from gonality.errors import GraphFormatError, InvalidInputError
from gonality.graph import Edge, MultiGraph
from gonality.morphism import EdgeImage, IndexedMorphism

DOMAIN_EDGE_PREFIX = "e"
CODOMAIN_EDGE_PREFIX = "f"
SECTIONS = ("domain", "codomain", "origin", "vmap", "emap")

_SECTION = re.compile(r"^\[(\w+)\]\s*(.*)$")
_VMAP = re.compile(r"^(\S+)\s*->\s*(\S+)$")
_EMAP = re.compile(r"^(\S+)\s*->\s*(\S+)\s*:\s*(-?\d+)$")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    """Non-empty lines with comments removed, numbered from 1."""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _check_name(name: str) -> None:
    if not name or any(c.isspace() for c in name) or "#" in name or name == "v":
        raise InvalidInputError(f"Vertex name {name!r} cannot be written to a graph file")


# --- Graphs -----------------------------------------------------------------


def parse_graph(
    text: str, source: str = "<string>", edge_prefix: str = DOMAIN_EDGE_PREFIX
) -> MultiGraph:
    """Parse the graph format; raises GraphFormatError with the line number."""
    order: dict[str, None] = {}
    edges: list[Edge] = []
    for number, line in _lines(text):
        parts = line.split()
        if len(parts) == 2 and parts[0] == "v":
            order.setdefault(parts[1])
        elif len(parts) == 2:
            u, v = parts
            order.setdefault(u)
            order.setdefault(v)
            edges.append(Edge(f"{edge_prefix}{len(edges) + 1}", u, v))
        else:
            raise GraphFormatError(
                f"{source}:{number}: expected 'v <name>' or '<u> <v>', got {line!r}"
            )
    if not order:
        raise GraphFormatError(f"{source}: no vertices")
    graph = MultiGraph(tuple(order), tuple(edges))
    if not graph.is_connected():
        raise GraphFormatError(f"{source}: graph is not connected")
    return graph


def read_graph(path: Path, edge_prefix: str = DOMAIN_EDGE_PREFIX) -> MultiGraph:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise GraphFormatError(f"Cannot read graph file {path}: {e}") from e
    graph = parse_graph(text, str(path), edge_prefix)
    logging.debug("Read %s: %d vertices, %d edges", path, len(graph.vertices), len(graph.edges))
    return graph


def canonical_edges(
    graph: MultiGraph, prefix: str = DOMAIN_EDGE_PREFIX
) -> tuple[MultiGraph, dict[str, str]]:
    """Rename edges to <prefix>1, <prefix>2, ... in order; returns the renaming."""
    rename = {e.id: f"{prefix}{i}" for i, e in enumerate(graph.edges, start=1)}
    edges = tuple(Edge(rename[e.id], e.u, e.v) for e in graph.edges)
    return MultiGraph(graph.vertices, edges), rename


def format_graph(graph: MultiGraph) -> str:
    """Canonical text: every vertex declared, then the edges in order."""
    lines = [f"# {len(graph.vertices)} vertices, {len(graph.edges)} edges"]
    for v in graph.vertices:
        _check_name(v)
        lines.append(f"v {v}")
    lines.extend(f"{e.u} {e.v}" for e in graph.edges)
    return "\n".join(lines) + "\n"


def write_graph(graph: MultiGraph, path: Path) -> Path:
    path.write_text(format_graph(graph), encoding="utf-8")
    logging.info("Wrote graph to %s", path)
    return path


# --- Morphisms -----------------------------------------------------------


def _split_sections(text: str, source: str) -> dict[str, list[tuple[int, str]]]:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    for number, line in _lines(text):
        header = _SECTION.match(line)
        if header:
            current = header.group(1)
            if current not in SECTIONS:
                raise GraphFormatError(f"{source}:{number}: unknown section [{current}]")
            if current in sections:
                raise GraphFormatError(f"{source}:{number}: section [{current}] repeated")
            sections[current] = []
            if header.group(2):
                sections[current].append((number, header.group(2)))
        elif current is None:
            raise GraphFormatError(f"{source}:{number}: text before the first section")
        else:
            sections[current].append((number, line))
    for required in ("domain", "codomain", "vmap", "emap"):
        if required not in sections:
            raise GraphFormatError(f"{source}: missing section [{required}]")
    return sections


def _single_path(
    entries: list[tuple[int, str]], name: str, base_dir: Path, source: str
) -> Path:
    if len(entries) != 1:
        raise GraphFormatError(f"{source}: [{name}] needs exactly one path")
    return base_dir / entries[0][1]


def _parse_vmap(entries: list[tuple[int, str]], source: str) -> dict[str, str]:
    vmap: dict[str, str] = {}
    for number, line in entries:
        match = _VMAP.match(line)
        if not match:
            raise GraphFormatError(f"{source}:{number}: expected 'u -> x', got {line!r}")
        u, x = match.groups()
        if u in vmap:
            raise GraphFormatError(f"{source}:{number}: vertex {u} mapped twice")
        vmap[u] = x
    return vmap


def _parse_emap(entries: list[tuple[int, str]], source: str) -> dict[str, EdgeImage]:
    emap: dict[str, EdgeImage] = {}
    for number, line in entries:
        match = _EMAP.match(line)
        if not match:
            raise GraphFormatError(f"{source}:{number}: expected 'eK -> fJ : r', got {line!r}")
        eid, target, index = match.group(1), match.group(2), int(match.group(3))
        if index < 0:
            raise GraphFormatError(f"{source}:{number}: negative index {index}")
        if eid in emap:
            raise GraphFormatError(f"{source}:{number}: edge {eid} mapped twice")
        emap[eid] = EdgeImage(target, index)
    return emap


def parse_morphism(text: str, base_dir: Path, source: str = "<string>") -> IndexedMorphism:
    """
    Parse the morphism format, reading the two graph files it names.

    An index 0 anywhere makes the morphism a Caporaso one. Structural
    problems (unknown ids, unmapped vertices, edges mapped off their
    endpoints) surface as GraphFormatError.
    """
    sections = _split_sections(text, source)
    domain = read_graph(_single_path(sections["domain"], "domain", base_dir, source))
    codomain = read_graph(
        _single_path(sections["codomain"], "codomain", base_dir, source), CODOMAIN_EDGE_PREFIX
    )
    vmap = _parse_vmap(sections["vmap"], source)
    emap = _parse_emap(sections["emap"], source)
    origin = None
    if "origin" in sections:
        origin = frozenset(v for _, line in sections["origin"] for v in line.split())
    variant = "caporaso" if any(image.index == 0 for image in emap.values()) else "finite"
    unknown_edges = sorted(set(emap) - {e.id for e in domain.edges})
    if unknown_edges:
        raise GraphFormatError(f"{source}: [emap] names unknown domain edges {unknown_edges}")
    try:
        return IndexedMorphism(domain, codomain, vmap, emap, variant, origin)
    except InvalidInputError as e:
        raise GraphFormatError(f"{source}: {e}") from e


def read_morphism(path: Path) -> IndexedMorphism:
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise GraphFormatError(f"Cannot read morphism file {path}: {e}") from e
    return parse_morphism(text, path.parent, str(path))


def format_morphism(
    phi: IndexedMorphism,
    domain_path: str,
    codomain_path: str,
    edge_names: Mapping[str, str] | None = None,
    target_names: Mapping[str, str] | None = None,
) -> str:
    """Morphism text; the renamings map edge ids to the ids the graph files will get."""
    edge_names = edge_names or {}
    target_names = target_names or {}
    lines = [f"[domain] {domain_path}", f"[codomain] {codomain_path}"]
    if phi.origin is not None:
        lines.append("[origin]")
        lines.append(" ".join(v for v in phi.domain.vertices if v in phi.origin))
    lines.append("[vmap]")
    lines.extend(f"{v} -> {phi.vmap[v]}" for v in phi.domain.vertices)
    lines.append("[emap]")
    for e in phi.domain.edges:
        target, r = phi.emap[e.id]
        image = target if r == 0 else target_names.get(target, target)
        lines.append(f"{edge_names.get(e.id, e.id)} -> {image} : {r}")
    return "\n".join(lines) + "\n"


def write_morphism(phi: IndexedMorphism, path: Path) -> Path:
    """
    Write φ to `path` with its two graphs beside it.

    The graphs go to <stem>.domain.graph and <stem>.codomain.graph; edge ids
    are renumbered to match the graph files.
    """
    domain, edge_names = canonical_edges(phi.domain, DOMAIN_EDGE_PREFIX)
    codomain, target_names = canonical_edges(phi.codomain, CODOMAIN_EDGE_PREFIX)
    domain_path = path.with_name(f"{path.stem}.domain.graph")
    codomain_path = path.with_name(f"{path.stem}.codomain.graph")
    write_graph(domain, domain_path)
    write_graph(codomain, codomain_path)
    text = format_morphism(phi, domain_path.name, codomain_path.name, edge_names, target_names)
    path.write_text(text, encoding="utf-8")
    logging.info("Wrote morphism of %d domain edges to %s", len(domain.edges), path)
    return path


# --- DOT ------------------------------------------------------------------------


def _quote(name: str) -> str:
    escaped = name.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def graph_to_dot(graph: MultiGraph, name: str = "G") -> str:
    """Undirected DOT graph; edge ids become labels."""
    lines = [f"graph {_quote(name)} {{"]
    lines.extend(f"  {_quote(v)};" for v in graph.vertices)
    lines.extend(
        f"  {_quote(e.u)} -- {_quote(e.v)} [label={_quote(e.id)}];" for e in graph.edges
    )
    lines.append("}")
    return "\n".join(lines) + "\n"


def morphism_to_dot(phi: IndexedMorphism, name: str = "phi") -> str:
    """The domain, labelled with vertex images and "target:index" on edges."""
    lines = [f"graph {_quote(name)} {{"]
    for v in phi.domain.vertices:
        lines.append(f"  {_quote(v)} [label={_quote(f'{v} > {phi.vmap[v]}')}];")
    for e in phi.domain.edges:
        target, r = phi.emap[e.id]
        style = " style=dashed" if r == 0 else ""
        lines.append(
            f"  {_quote(e.u)} -- {_quote(e.v)} [label={_quote(f'{target}:{r}')}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
