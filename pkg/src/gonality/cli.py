#!/usr/bin/env python
"""
Command-line interface for the graph gonality toolkit.

Every command is a thin shell over the library: it resolves its graph or
morphism argument, runs one computation and prints a table (or JSON with
--json). Logs go to standard error.

Exit codes:
  0  success
  1  verification or postcondition failure
  2  parse error or invalid input
  3  budget exhausted, only an interval is known
  4  rebuild precondition violated
"""

import argparse
import json
import logging
import sys
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

import pandas as pd
from pydantic import ValidationError

from gonality import drinfeld
from gonality.chipfire import divisorial_gonality, divisorial_lower_bounds
from gonality.config import (
    DGON_MAX_VERTICES,
    TABLE_SGON_BUDGET,
    GonalitySettings,
    load_config,
    setup_logging,
)
from gonality.errors import BudgetExhaustedError, GonalityError, InvalidInputError
from gonality.formats import (
    graph_to_dot,
    morphism_to_dot,
    read_graph,
    read_morphism,
    write_graph,
    write_morphism,
)
from gonality.generators import by_name, ppchange_example, table_corpus
from gonality.graph import MultiGraph, edge_connectivity, genus, max_degree, treewidth, volume
from gonality.models import BoundKind, BoundReport, SearchBudget, format_fraction
from gonality.morphism import IndexedMorphism, verify
from gonality.rebuild import RebuildParams, pipeline_bound, rebuild
from gonality.search import SearchOutcome, gon, sgon, sgon_certify
from gonality.spectral import bound_report, lambda1, points_degree_bound

EXIT_INTERVAL = BudgetExhaustedError.exit_code

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


# --- Argument resolution -----------------------------------------------------


def load_graph(source: str) -> tuple[str, MultiGraph]:
    """A graph file path, or a built-in name such as k4, c5, knn3, b2, p4."""
    path = Path(source)
    if path.exists():
        return path.stem, read_graph(path)
    return source, by_name(source)


def budget_from(args: argparse.Namespace, settings: GonalitySettings) -> SearchBudget:
    """Command-line flags win over the config file, which wins over defaults."""

    def pick(flag: Any, default: Any) -> Any:
        return default if flag is None else flag

    return SearchBudget(
        max_subdivisions=pick(args.subdiv, settings.max_subdivisions),
        max_leaf_paths=pick(args.leaves, settings.max_leaf_paths),
        max_leaf_length=pick(args.leaf_len, settings.max_leaf_length),
        max_degree=pick(args.max_degree, settings.max_degree),
        node_limit=pick(args.node_limit, settings.node_limit),
    )


# --- Output --------------------------------------------------------------------


def emit(args: argparse.Namespace, payload: Any, table: pd.DataFrame | None = None) -> None:
    """Print JSON when --json is set, else the table (or the payload as text)."""
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    elif table is not None:
        print(table.to_markdown(index=False))
    else:
        print(payload)


def report_table(report: BoundReport) -> pd.DataFrame:
    rows = [
        {
            "target": b.target,
            "kind": b.kind.value,
            "name": b.name,
            "value": format_fraction(b.value_exact),
            "provenance": b.provenance,
        }
        for b in report.bounds
    ]
    return pd.DataFrame(rows, columns=["target", "kind", "name", "value", "provenance"])


def emit_report(args: argparse.Namespace, report: BoundReport) -> None:
    emit(args, report.model_dump(mode="json"), report_table(report))


def outcome_payload(name: str, outcome: SearchOutcome) -> dict[str, Any]:
    return {
        "graph": name,
        "lower": outcome.lower,
        "upper": outcome.upper,
        "exact": outcome.exact,
        "exhaustive": outcome.exhaustive,
        "nodes": outcome.nodes,
        "lower_bounds": [{"name": n, "value": v} for n, v, _ in outcome.lower_bounds],
        "reason": outcome.reason,
    }


def save_witness(phi: IndexedMorphism | None, target: Path | None) -> str | None:
    if phi is None or target is None:
        return None
    return str(write_morphism(phi, target))


# --- Commands ---------------------------------------------------------------------


def cmd_invariants(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    graph.require_connected()
    row: dict[str, Any] = {
        "graph": name,
        "|V|": len(graph.vertices),
        "|E|": len(graph.edges),
        "g": genus(graph),
        "Delta": max_degree(graph),
        "vol": volume(graph),
    }
    if len(graph.vertices) > 1:
        row["eta"] = edge_connectivity(graph)
        row["tw"] = treewidth(graph, settings.treewidth_max_vertices)
        row["lambda"] = str(lambda1(graph, settings.spectral_tolerance))
        row["lambda~"] = str(lambda1(graph, settings.spectral_tolerance, "normalized"))
    emit(args, row, pd.DataFrame([row]))
    return 0


def cmd_bound(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    budget = None
    if args.class_budget is not None:
        budget = SearchBudget(max_subdivisions=args.class_budget, max_leaf_paths=0)
    report = bound_report(graph, name, args.normalized, budget, settings.spectral_tolerance)
    emit_report(args, report)
    return 0


def cmd_sgon(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    budget = budget_from(args, settings)
    report = sgon_certify(graph, budget, settings.spectral_tolerance, name)
    report.witness_path = save_witness(report.witness, args.witness)
    emit_report(args, report)
    if report.status != "exact":
        low = report.best("sgon", BoundKind.LOWER)
        high = report.best("sgon", BoundKind.UPPER)
        logging.warning("sgon only bracketed: [%s, %s]", low, high)
        return EXIT_INTERVAL
    return 0


def cmd_gon(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    outcome = gon(graph, args.node_limit or settings.node_limit)
    payload = outcome_payload(name, outcome)
    payload["witness_path"] = save_witness(outcome.witness, args.witness)
    row = {k: payload[k] for k in ("graph", "lower", "upper", "exact")}
    emit(args, payload, pd.DataFrame([row]))
    return 0 if outcome.exact else EXIT_INTERVAL


def cmd_dgon(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    bounds = divisorial_lower_bounds(graph)
    found = divisorial_gonality(graph, max_vertices=args.max_vertices)
    payload: dict[str, Any] = {
        "graph": name,
        "dgon": found[0] if found else None,
        "divisor": found[1].as_dict() if found else None,
        "lower_bounds": {label: value for label, value, _ in bounds},
    }
    row = {"graph": name, "dgon": payload["dgon"], "divisor": str(found[1]) if found else ""}
    emit(args, payload, pd.DataFrame([row]))
    return 0 if found else EXIT_INTERVAL


def cmd_verify(args: argparse.Namespace, settings: GonalitySettings) -> int:
    phi = read_morphism(args.morphism)
    report = verify(phi)
    payload = {
        "harmonic": report.harmonic,
        "degree": report.degree,
        "variant": phi.variant,
        "m": report.m,
        "violations": [v._asdict() for v in report.violations],
        "degenerate": report.degenerate,
    }
    text = f"harmonic: {report.harmonic}, degree: {report.degree}"
    for v in report.violations:
        text += f"\n  {v.kind} at {v.vertex}: edges {v.edges} sums {v.sums}"
    emit(args, payload if args.json else text)
    return 0 if report.harmonic else 1


def _rebuild_params(args: argparse.Namespace) -> RebuildParams:
    return RebuildParams(A=args.A, B=args.B, C=args.C)


def cmd_rebuild(args: argparse.Namespace, settings: GonalitySettings) -> int:
    phi = read_morphism(args.morphism)
    params = _rebuild_params(args)
    if args.pipeline:
        bound = pipeline_bound(phi, params, settings.spectral_tolerance)
        emit(args, bound.model_dump(mode="json"), pd.DataFrame([bound.model_dump(mode="json")]))
        return 0
    result = rebuild(phi, params)
    payload = result.summary.model_dump(mode="json")
    payload["witness_path"] = save_witness(result.phi, args.out)
    rows = pd.DataFrame(
        [
            {"quantity": key, "value": payload[key]}
            for key in ("x0", "central_edge", "degree_before", "degree_after", "degree_cap")
            + ("size_left", "size_right", "size_threshold")
        ]
    )
    emit(args, payload, rows)
    return 0


def cmd_points_bound(args: argparse.Namespace, settings: GonalitySettings) -> int:
    name, graph = load_graph(args.graph)
    value = points_degree_bound(graph, settings.spectral_tolerance)
    payload = {"graph": name, "value_exact": format_fraction(value), "value_float": float(value)}
    emit(args, payload, pd.DataFrame([payload]))
    if value <= 0:
        logging.info("The bound certifies nothing for %s", name)
    return 0


def cmd_drinfeld(args: argparse.Namespace, settings: GonalitySettings) -> int:
    place = drinfeld.PlaceData(q=args.q, delta=args.delta)
    if args.what == "c":
        value: Any = drinfeld.ExactValue(name="c", value=drinfeld.c_q_delta(place))
        payload = value.model_dump(mode="json")
    elif args.what == "index":
        ideal = drinfeld.IdealFactorization.parse(args.ideal)
        payload = {"name": "gamma0_index", "value": drinfeld.gamma0_index(place, ideal)}
    elif args.what == "moddeg":
        ideal = drinfeld.IdealFactorization.parse(args.ideal)
        value = drinfeld.ExactValue(
            name="moddeg_lower", value=drinfeld.modular_degree_lower_bound(place, ideal)
        )
        payload = value.model_dump(mode="json")
    elif args.what == "gon":
        value = drinfeld.ExactValue(
            name="gon_lower", value=drinfeld.gonality_lower_bound_index(place, args.index)
        )
        payload = value.model_dump(mode="json")
    else:
        rc = drinfeld.cusp_ramification(args.q, args.d)
        payload = {"name": "R_c", "value": format_fraction(rc), "decimal": float(rc)}
    emit(args, payload, pd.DataFrame([payload]))
    return 0


def table_rows(settings: GonalitySettings) -> list[dict[str, Any]]:
    """One row per graph of the built-in corpus."""
    budget = SearchBudget(**TABLE_SGON_BUDGET, node_limit=settings.node_limit)
    rows = []
    for name, graph in table_corpus():
        stable = sgon(graph, budget, settings.spectral_tolerance)
        caporaso = gon(graph, settings.node_limit)
        found = divisorial_gonality(graph, max_vertices=DGON_MAX_VERTICES)
        rows.append(
            {
                "graph": name,
                "sgon": _interval(stable),
                "gon": _interval(caporaso),
                "dgon": found[0] if found else None,
                "eta": edge_connectivity(graph),
                "tw": treewidth(graph, settings.treewidth_max_vertices),
                "Delta": max_degree(graph),
                "|G|": len(graph.vertices),
                "vol": volume(graph),
                "lambda": float(lambda1(graph, settings.spectral_tolerance).lower),
                "lambda~": float(
                    lambda1(graph, settings.spectral_tolerance, "normalized").lower
                ),
            }
        )
        logging.info("Table row for %s done", name)
    return rows


def _interval(outcome: SearchOutcome) -> str:
    if outcome.exact:
        return str(outcome.lower)
    return f"[{outcome.lower}, {outcome.upper if outcome.upper is not None else '?'}]"


def cmd_table(args: argparse.Namespace, settings: GonalitySettings) -> int:
    rows = table_rows(settings)
    frame = pd.DataFrame(rows)
    if args.out is not None:
        frame.to_csv(args.out, index=False)
        logging.info("Wrote table to %s", args.out)
    emit(args, rows, frame.round(6))
    exact = all("[" not in row["sgon"] and "[" not in row["gon"] for row in rows)
    return 0 if exact else EXIT_INTERVAL


def cmd_generate(args: argparse.Namespace, settings: GonalitySettings) -> int:
    args.out.mkdir(parents=True, exist_ok=True)
    if args.name == "ppchange-example":
        example = ppchange_example()
        written = [
            write_graph(example.graph, args.out / "G.graph"),
            write_morphism(example.phi, args.out / "phi.morphism"),
        ]
    else:
        graph = by_name(args.name, args.n)
        label = args.name if args.n is None else f"{args.name}{args.n}"
        written = [write_graph(graph, args.out / f"{label}.graph")]
    emit(args, [str(p) for p in written])
    return 0


def cmd_dot(args: argparse.Namespace, settings: GonalitySettings) -> int:
    path = Path(args.source)
    if path.suffix == ".morphism":
        print(morphism_to_dot(read_morphism(path), path.stem), end="")
    else:
        name, graph = load_graph(args.source)
        print(graph_to_dot(graph, name), end="")
    return 0


# --- Parser -----------------------------------------------------------------------


def _add_budget_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--subdiv", type=int, help="Subdivisions per edge (default: config)")
    parser.add_argument("--leaves", type=int, help="Leaf-paths allowed (default: unlimited)")
    parser.add_argument("--leaf-len", type=int, help="Maximal leaf-path length")
    parser.add_argument("--max-degree", type=int, help="Degree cap of the search")
    parser.add_argument("--node-limit", type=int, help="Search nodes before giving up")
    parser.add_argument("--witness", type=Path, help="Write the witness morphism here")


def _add_drinfeld_parser(commands: Any) -> None:
    p = commands.add_parser("drinfeld", help="Constants for Drinfeld modular curves")
    p.add_argument("what", choices=["c", "index", "moddeg", "gon", "rc"])
    p.add_argument("--q", type=int, required=True, help="Size of the constant field")
    p.add_argument("--delta", type=int, default=1, help="Degree of the place at infinity")
    p.add_argument("--ideal", default="", help='Prime factorisation as "d^m,..." (index, moddeg)')
    p.add_argument("--index", type=int, default=1, help="Index of the congruence subgroup (gon)")
    p.add_argument("--d", type=int, default=1, help="Degree of the level (rc)")
    p.set_defaults(handler=cmd_drinfeld)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gonality",
        description="Gonality invariants, spectral bounds and harmonic morphisms of multigraphs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""Examples:
  %(prog)s invariants k4             Invariants of the complete graph K_4
  %(prog)s bound knn4 --normalized   Spectral lower bounds on sgon
  %(prog)s sgon b3 --subdiv 1 --leaves 0
  %(prog)s generate ppchange-example --out work/
  %(prog)s rebuild work/phi.morphism --A 1/5 --B 3/10 --C 1/2
  %(prog)s drinfeld c --q 5
""",
    )
    parser.add_argument("--log-level", choices=list(LOG_LEVELS), default="info")
    parser.add_argument("--config", type=Path, help="YAML file overriding budgets and tolerance")
    parser.add_argument("--json", action="store_true", help="Print JSON instead of a table")
    commands = parser.add_subparsers(dest="command", required=True)

    for name, handler, help_text in (
        ("invariants", cmd_invariants, "Classical and spectral invariants"),
        ("bound", cmd_bound, "Spectral lower bounds on stable gonality"),
        ("sgon", cmd_sgon, "Stable gonality within a refinement budget"),
        ("gon", cmd_gon, "Caporaso gonality"),
        ("dgon", cmd_dgon, "Divisorial gonality"),
        ("points-bound", cmd_points_bound, "Degree bound from rational points"),
        ("dot", cmd_dot, "DOT export of a graph or morphism"),
    ):
        p = commands.add_parser(name, help=help_text)
        p.add_argument("graph" if name != "dot" else "source", help="Graph file or built-in name")
        p.set_defaults(handler=handler)
        if name == "bound":
            p.add_argument("--normalized", action="store_true")
            p.add_argument("--class-budget", type=int, help="Subdivisions per edge to scan")
        elif name == "sgon":
            _add_budget_options(p)
        elif name == "gon":
            p.add_argument("--node-limit", type=int)
            p.add_argument("--witness", type=Path)
        elif name == "dgon":
            p.add_argument("--max-vertices", type=int, default=DGON_MAX_VERTICES)

    p = commands.add_parser("verify", help="Check harmonicity of a morphism file")
    p.add_argument("morphism", type=Path)
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("rebuild", help="Rebuild a morphism around its heavy vertex")
    p.add_argument("morphism", type=Path)
    for constant in ("A", "B", "C"):
        p.add_argument(f"--{constant}", type=Fraction, required=True)
    p.add_argument("--out", type=Path, help="Write the rebuilt morphism here")
    p.add_argument("--pipeline", action="store_true", help="Report the case bound instead")
    p.set_defaults(handler=cmd_rebuild)

    _add_drinfeld_parser(commands)

    p = commands.add_parser("table", help="Invariants of the built-in corpus")
    p.add_argument("--out", type=Path, help="Also write the table as CSV")
    p.set_defaults(handler=cmd_table)

    p = commands.add_parser("generate", help="Write a built-in graph or the rebuild example")
    p.add_argument("name", help="kn, cn, knn, bn, path, a short name, or ppchange-example")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--out", type=Path, default=Path("."))
    p.set_defaults(handler=cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=LOG_LEVELS[args.log_level], simple_format=True)
    handler: Callable[[argparse.Namespace, GonalitySettings], int] = args.handler
    try:
        settings = load_config(args.config)
        return handler(args, settings)
    except ValidationError as e:
        logging.error("Invalid parameters: %s", e)
        return InvalidInputError.exit_code
    except GonalityError as e:
        culprit = getattr(e, "culprit", None)
        logging.error("%s%s", e, f" (at {culprit})" if culprit else "")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
