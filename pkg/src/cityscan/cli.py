"""Command-line front door: analyze, graph, heatmap, bars, suggest, fixture, serve.

Exit codes: 0 analysis completed (violations are findings, not errors),
1 unreadable or invalid input, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from .compliance import (
    RegulationRule,
    aggregate_by_neighborhood,
    detect_violations,
    suggest_placements,
)
from .fixture import FixtureConfig, generate_city, write_fixture
from .graph import build_unipartite_graph, connected_components, graph_to_dict
from .ingest import (
    CityDataset,
    IngestError,
    ParseResult,
    assemble_dataset,
    parse_boundaries_geojson,
    parse_facilities_csv,
    parse_objects_csv,
)
from .reports import (
    bars_table_csv,
    build_heatmap_document,
    report_to_dict,
    suggestions_to_dict,
    violations_to_csv,
)

logger = logging.getLogger("cityscan")

_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class InputError(Exception):
    """Unreadable or invalid input file; maps to exit code 1."""


def configure_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("CITYSCAN_LOG", "warn"), logging.WARNING)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)  # effective on repeated invocations too


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value) or not value > 0:
        raise argparse.ArgumentTypeError(f"must be a finite number > 0: {text}")
    return value


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return value


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not valid UTF-8 text ({e.reason})") from None


def _clean_records(path: str, result: ParseResult):
    if result.rejected:
        first = result.rejected[0]
        more = f" (+{len(result.rejected) - 1} more)" if len(result.rejected) > 1 else ""
        raise InputError(f"{path}: row {first.row}: {first.reason}{more}")
    return result.records


def _load_dataset(args) -> CityDataset:
    try:
        facilities = _clean_records(args.facilities, parse_facilities_csv(_read_file(args.facilities)))
        objects = _clean_records(args.objects, parse_objects_csv(_read_file(args.objects), args.kind))
        regions = parse_boundaries_geojson(_read_file(args.boundaries))
        dataset = assemble_dataset(facilities, objects, regions, source=args.facilities)
    except IngestError as e:
        raise InputError(str(e)) from None
    logger.info(
        "loaded %d facilities, %d objects, %d boundary parts",
        len(dataset.facilities),
        len(dataset.objects),
        len(dataset.neighborhoods),
    )
    if args.neighborhood or args.facility_type:
        dataset = dataset.subset(args.neighborhood or None, args.facility_type or None)
    return dataset


def _rule_from(args) -> RegulationRule:
    exclude = tuple(t.strip() for t in args.exclude_types.split(",") if t.strip())
    return RegulationRule(kind=args.kind, threshold_m=args.threshold, exclude_types=exclude)


def _write_output(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def _write_json(path: str, doc) -> None:
    _write_output(path, json.dumps(doc, indent=2) + "\n")


def cmd_analyze(args) -> int:
    dataset = _load_dataset(args)
    report = detect_violations(dataset, _rule_from(args))
    if args.format == "csv":
        _write_output(args.output, violations_to_csv(report))
    else:
        _write_json(args.output, report_to_dict(report))
    print(f"facilities checked: {report.totals.facilities_checked}")
    print(f"violations: {report.totals.violation_count}")
    print("top neighborhoods:")
    for name, count in aggregate_by_neighborhood(report)[:5]:
        print(f"  {name}: {count}")
    return 0


def cmd_graph(args) -> int:
    objects = _clean_records(args.objects, parse_objects_csv(_read_file(args.objects), args.kind))
    graph = build_unipartite_graph(objects, args.threshold)
    _write_json(args.output, graph_to_dict(graph))
    components = connected_components(graph)
    print(f"vertices: {len(graph.left_vertices)}")
    print(f"edges: {len(graph.edges)}")
    print(f"components: {len(components)}")
    return 0


def cmd_heatmap(args) -> int:
    dataset = _load_dataset(args)
    report = detect_violations(dataset, _rule_from(args))
    _write_json(args.output, build_heatmap_document(dataset, report))
    print(f"violations: {report.totals.violation_count}")
    return 0


def cmd_bars(args) -> int:
    dataset = _load_dataset(args)
    report = detect_violations(dataset, _rule_from(args))
    _write_output(args.output, bars_table_csv(report))
    print(f"violations: {report.totals.violation_count}")
    return 0


def cmd_suggest(args) -> int:
    dataset = _load_dataset(args)
    rule = _rule_from(args)
    picked = suggest_placements(dataset, rule, args.k)
    _write_json(args.output, suggestions_to_dict(rule, picked))
    covered = sum(s.covered_count for s in picked)
    print(f"suggestions: {len(picked)} covering {covered} facilities")
    return 0


def cmd_fixture(args) -> int:
    config = FixtureConfig(
        seed=args.seed,
        facilities=args.facilities,
        objects=args.objects,
        neighborhoods=args.neighborhoods,
    )
    city = generate_city(config)
    manifest = write_fixture(city, args.out_dir)
    print(f"wrote fixture city to {args.out_dir}")
    for threshold, ids in manifest["violations_by_threshold"].items():
        print(f"  violations at {threshold} m: {len(ids)}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    try:
        facilities = _clean_records(args.facilities, parse_facilities_csv(_read_file(args.facilities)))
        hydrants = _clean_records(
            args.objects_hydrants, parse_objects_csv(_read_file(args.objects_hydrants), "hydrant")
        )
        shelters = _clean_records(
            args.objects_shelters, parse_objects_csv(_read_file(args.objects_shelters), "shelter")
        )
        regions = parse_boundaries_geojson(_read_file(args.boundaries))
        dataset = assemble_dataset(facilities, hydrants + shelters, regions, source=args.facilities)
    except IngestError as e:
        raise InputError(str(e)) from None
    app = create_app(dataset, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_dataset_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--facilities", required=True, help="facilities CSV (id,name,type,lat,lon)")
    parser.add_argument("--objects", required=True, help="safety-objects CSV")
    parser.add_argument("--kind", required=True, choices=("hydrant", "shelter"))
    parser.add_argument("--threshold", required=True, type=_positive_float, help="rule distance in meters")
    parser.add_argument("--boundaries", required=True, help="neighborhood boundaries GeoJSON")
    parser.add_argument("--exclude-types", default="", metavar="T1,T2", help="facility types to skip")
    parser.add_argument(
        "--neighborhood", action="append", default=[], help="restrict to a neighborhood (repeatable)"
    )
    parser.add_argument(
        "--facility-type", action="append", default=[], help="restrict to a facility type (repeatable)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cityscan", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("analyze", help="detect regulation violations")
    _add_dataset_flags(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("graph", help="export the object-to-object proximity graph")
    p.add_argument("--objects", required=True)
    p.add_argument("--kind", choices=("hydrant", "shelter"), default="hydrant")
    p.add_argument("--threshold", required=True, type=_non_negative_float)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_graph)

    p = sub.add_parser("heatmap", help="export per-neighborhood violation counts as GeoJSON")
    _add_dataset_flags(p)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_heatmap)

    p = sub.add_parser("bars", help="export the facility-type x neighborhood matrix as CSV")
    _add_dataset_flags(p)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_bars)

    p = sub.add_parser("suggest", help="greedy placement suggestions for new safety objects")
    _add_dataset_flags(p)
    p.add_argument("--k", required=True, type=_positive_int)
    p.add_argument("--output", required=True)
    p.set_defaults(handler=cmd_suggest)

    p = sub.add_parser("fixture", help="generate a synthetic city with ground truth")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--facilities", required=True, type=_positive_int)
    p.add_argument("--objects", required=True, type=_positive_int)
    p.add_argument("--neighborhoods", type=_positive_int, default=15)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=cmd_fixture)

    p = sub.add_parser("serve", help="serve the HTTP API over a dataset snapshot")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--facilities", required=True)
    p.add_argument("--objects-hydrants", required=True)
    p.add_argument("--objects-shelters", required=True)
    p.add_argument("--boundaries", required=True)
    p.add_argument("--ui-dir", default=None, help="serve a built explorer UI at /")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if getattr(args, "handler", None) is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.handler(args)
    except InputError as e:
        print(f"cityscan: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
