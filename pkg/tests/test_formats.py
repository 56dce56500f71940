"""Tests for the graph and morphism text formats and DOT export."""

from pathlib import Path

import pytest

from gonality.errors import GraphFormatError, InvalidInputError
from gonality.formats import (
    canonical_edges,
    format_graph,
    graph_to_dot,
    morphism_to_dot,
    parse_graph,
    parse_morphism,
    read_graph,
    read_morphism,
    write_graph,
    write_morphism,
)
from gonality.generators import WorkedExample, bn, cn, kn
from gonality.graph import Edge, MultiGraph, is_isomorphic
from gonality.morphism import EdgeImage, IndexedMorphism, verify

FOLD_TEXT = """\
[domain] c4.graph
[codomain] tree.graph
[vmap]
1 -> x
2 -> y
3 -> z
4 -> y
[emap]
e1 -> f1 : 1
e2 -> f2 : 1
e3 -> f2 : 1
e4 -> f1 : 1
"""


@pytest.fixture
def fold_dir(tmp_path: Path) -> Path:
    """C_4 and the path x - y - z, as graph files."""
    (tmp_path / "c4.graph").write_text("1 2\n2 3\n3 4\n4 1\n", encoding="utf-8")
    (tmp_path / "tree.graph").write_text("x y\ny z\n", encoding="utf-8")
    return tmp_path


def test_parse_graph_basics() -> None:
    """Vertices in order of first occurrence, edges numbered in file order."""
    text = "# a banana with two tails\nv first\na b\na b  # parallel\nb c\nc c\nc first\n"
    graph = parse_graph(text)
    assert graph.vertices == ("first", "a", "b", "c")
    assert [e.id for e in graph.edges] == ["e1", "e2", "e3", "e4", "e5"]
    assert graph.edges[3] == Edge("e4", "c", "c")
    assert graph.has_loops


def test_parse_graph_edge_prefix() -> None:
    graph = parse_graph("x y\n", edge_prefix="f")
    assert graph.edges[0].id == "f1"


@pytest.mark.parametrize(
    ("text", "needle"),
    [
        ("a b\na b c\n", "<string>:2:"),
        ("a\n", "<string>:1:"),
        ("# nothing\n\n", "no vertices"),
        ("a b\nc d\n", "not connected"),
        ("v x\na b\n", "not connected"),
    ],
)
def test_parse_graph_errors(text: str, needle: str) -> None:
    with pytest.raises(GraphFormatError) as excinfo:
        parse_graph(text)
    assert needle in str(excinfo.value)
    assert excinfo.value.exit_code == 2


def test_read_graph_missing_file(tmp_path: Path) -> None:
    with pytest.raises(GraphFormatError):
        read_graph(tmp_path / "absent.graph")


def test_format_graph_is_read_back(tmp_path: Path) -> None:
    """Writing then reading keeps vertex order and edge ends."""
    graph = MultiGraph.from_pairs([("a", "b"), ("a", "b"), ("b", "b"), ("b", "z")], ["z", "a", "b"])
    text = format_graph(graph)
    assert text.startswith("# 3 vertices, 4 edges\n")
    assert "v z\n" in text
    back = read_graph(write_graph(graph, tmp_path / "g.graph"))
    assert back.vertices == graph.vertices
    assert [e.ends() for e in back.edges] == [e.ends() for e in graph.edges]


def test_format_graph_rejects_unwritable_names() -> None:
    for bad in ("v", "a b", "x#1"):
        with pytest.raises(InvalidInputError):
            format_graph(MultiGraph.from_pairs([(bad, "u")]))


def test_canonical_edges() -> None:
    graph = MultiGraph(("a", "b"), (Edge("left", "a", "b"), Edge("right", "a", "b")))
    renamed, rename = canonical_edges(graph, "f")
    assert rename == {"left": "f1", "right": "f2"}
    assert [e.id for e in renamed.edges] == ["f1", "f2"]


def test_parse_morphism(fold_dir: Path) -> None:
    phi = parse_morphism(FOLD_TEXT, fold_dir)
    assert phi.variant == "finite"
    assert phi.origin is None
    assert phi.emap["e4"] == EdgeImage("f1", 1)
    assert verify(phi).degree == 2


def test_read_morphism_with_origin(fold_dir: Path) -> None:
    text = FOLD_TEXT.replace("[vmap]", "[origin]\n1 2\n3 4\n[vmap]")
    (fold_dir / "fold.morphism").write_text(text, encoding="utf-8")
    phi = read_morphism(fold_dir / "fold.morphism")
    assert phi.origin == frozenset({"1", "2", "3", "4"})


@pytest.mark.parametrize(
    ("old", "new", "needle"),
    [
        ("[vmap]", "[vmaps]", "unknown section"),
        ("[emap]", "[vmap]", "repeated"),
        ("[domain] c4.graph", "c4.graph", "before the first section"),
        ("e4 -> f1 : 1", "e4 -> f1 : -1", "negative index"),
        ("e4 -> f1 : 1", "e3 -> f1 : 1", "mapped twice"),
        ("4 -> y", "3 -> y", "mapped twice"),
        ("e4 -> f1 : 1", "e9 -> f1 : 1", "unknown domain edges"),
        ("e4 -> f1 : 1", "e4 -> f1", "expected"),
        ("e3 -> f2 : 1", "e3 -> f1 : 1", "<string>"),
    ],
)
def test_morphism_errors(fold_dir: Path, old: str, new: str, needle: str) -> None:
    """Every structural problem is a format error naming the source."""
    with pytest.raises(GraphFormatError) as excinfo:
        parse_morphism(FOLD_TEXT.replace(old, new), fold_dir)
    assert needle in str(excinfo.value)


def test_missing_section(fold_dir: Path) -> None:
    head, _ = FOLD_TEXT.split("[emap]")
    with pytest.raises(GraphFormatError, match=r"missing section \[emap\]"):
        parse_morphism(head, fold_dir)


def test_collapsed_edge_makes_a_caporaso_morphism(tmp_path: Path) -> None:
    """K_3 folded onto an edge: 1, 2 over x, 3 over y, edge 1-2 collapsed."""
    (tmp_path / "k3.graph").write_text("1 2\n2 3\n3 1\n", encoding="utf-8")
    (tmp_path / "edge.graph").write_text("x y\n", encoding="utf-8")
    text = (
        "[domain] k3.graph\n[codomain] edge.graph\n"
        "[vmap]\n1 -> x\n2 -> x\n3 -> y\n"
        "[emap]\ne1 -> x : 0\ne2 -> f1 : 1\ne3 -> f1 : 1\n"
    )
    phi = parse_morphism(text, tmp_path)
    assert phi.variant == "caporaso"
    assert verify(phi).degree == 2


def test_write_and_read_worked_example(tmp_path: Path, worked: WorkedExample) -> None:
    """The graph files land beside the morphism file and ids are renumbered."""
    path = write_morphism(worked.phi, tmp_path / "pp.morphism")
    assert (tmp_path / "pp.domain.graph").exists()
    assert (tmp_path / "pp.codomain.graph").exists()
    back = read_morphism(path)
    assert back.origin == worked.phi.origin
    assert back.domain.vertices == worked.phi.domain.vertices
    assert back.vmap == worked.phi.vmap
    report = verify(back)
    assert report.harmonic
    assert report.degree == 8


def test_write_and_read_caporaso(tmp_path: Path) -> None:
    tree = MultiGraph(("x", "y"), (Edge("t", "x", "y"),))
    phi = IndexedMorphism(
        kn(3),
        tree,
        {"1": "x", "2": "x", "3": "y"},
        {"e1": EdgeImage("x", 0), "e2": EdgeImage("t", 1), "e3": EdgeImage("t", 1)},
        "caporaso",
    )
    back = read_morphism(write_morphism(phi, tmp_path / "k3.morphism"))
    assert back.variant == "caporaso"
    assert back.emap["e1"] == EdgeImage("x", 0)
    assert back.emap["e2"] == EdgeImage("f1", 1)
    assert is_isomorphic(back.domain, kn(3))


def test_graph_to_dot() -> None:
    dot = graph_to_dot(bn(2), "B2")
    assert dot.startswith('graph "B2" {\n')
    assert '  "a" -- "b" [label="e1"];' in dot
    assert '  "a" -- "b" [label="e2"];' in dot
    assert dot.endswith("}\n")


def test_morphism_to_dot(fold_dir: Path) -> None:
    phi = parse_morphism(FOLD_TEXT, fold_dir)
    dot = morphism_to_dot(phi)
    assert '"1" [label="1 > x"];' in dot
    assert '[label="f2:1"]' in dot
    assert "dashed" not in dot


def test_morphism_to_dot_marks_collapsed_edges() -> None:
    tree = MultiGraph(("x", "y"), (Edge("t", "x", "y"),))
    phi = IndexedMorphism(
        cn(3),
        tree,
        {"1": "x", "2": "x", "3": "y"},
        {"e1": EdgeImage("x", 0), "e2": EdgeImage("t", 1), "e3": EdgeImage("t", 1)},
        "caporaso",
    )
    assert '[label="x:0" style=dashed]' in morphism_to_dot(phi)
