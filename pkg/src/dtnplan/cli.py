"""Command-line entry points: run, compare, validate, serve.

Exit codes: 0 success, 2 usage error (argparse), 3 unreadable scenario
document, 4 validation failure (diagnostic names the offending field),
5 runtime or I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
from dataclasses import replace
from typing import Optional, Sequence

from . import FORMAT_VERSION
from .engine import RunResult, canonical_json, result_to_lines, run, summary_to_dict
from .reference import REFERENCE_NAMES, packaged_scenario_dir
from .scenario import (
    Scenario,
    ScenarioError,
    ScenarioParseError,
    WhatIfRequest,
    apply_what_if,
    load_scenario,
    parse_what_if,
)

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_RUNTIME = 5

BIND_ENV = "DTNPLAN_BIND"
DEFAULT_BIND = "127.0.0.1:8350"


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _resolve_scenario(ref: str) -> Scenario:
    """Load a scenario from a file path or a packaged scenario name."""
    if not os.path.exists(ref) and ref in REFERENCE_NAMES:
        ref = os.path.join(packaged_scenario_dir(), f"{ref}.json")
    return load_scenario(ref)


def _load_base(args: argparse.Namespace) -> Scenario:
    scenario = _resolve_scenario(args.scenario)
    if getattr(args, "max_cycles", None) is not None:
        if args.max_cycles < 1:
            raise ScenarioError("max_cycles", f"must be >= 1, got {args.max_cycles}")
        scenario = replace(scenario, max_cycles=args.max_cycles)
    return scenario


def _outcome_line(label: str, result: RunResult) -> str:
    if result.detection is not None:
        return (
            f"{label}: detected at cycle {result.detection.cycle} "
            f"by {result.detection.node_id} ({result.cycles} cycles, {result.wall_time_s:.2f}s)"
        )
    return f"{label}: {result.outcome} after {result.cycles} cycles, no detection ({result.wall_time_s:.2f}s)"


def _write_ndjson_file(result: RunResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for line in result_to_lines(result):
            handle.write(line + "\n")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        scenario = _load_base(args)
    except ScenarioParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ScenarioError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        return _fail(EXIT_RUNTIME, f"cannot read scenario: {exc}")
    result = run(scenario)
    if args.out:
        try:
            _write_ndjson_file(result, args.out)
        except OSError as exc:
            return _fail(EXIT_RUNTIME, f"cannot write output: {exc}")
    if args.format == "json":
        print(canonical_json(summary_to_dict(result)))
    else:
        print(_outcome_line(os.path.basename(args.scenario), result))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        _load_base(args)
    except ScenarioParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ScenarioError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        return _fail(EXIT_RUNTIME, f"cannot read scenario: {exc}")
    print(f"ok: {args.scenario}")
    return EXIT_OK


def _load_variants(path: str) -> list[WhatIfRequest]:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError("variants", f"invalid JSON: {exc}") from exc
    if isinstance(document, dict):
        if set(document) != {"variants"}:
            raise ScenarioError("variants", "expected a list or an object with a 'variants' key")
        document = document["variants"]
    if not isinstance(document, list):
        raise ScenarioError("variants", f"expected a list, got {type(document).__name__}")
    requests = [parse_what_if(obj, f"variants[{i}]") for i, obj in enumerate(document)]
    labels = ["base"] + [r.label for r in requests]
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise ScenarioError("variants", f"duplicate labels: {dupes}")
    return requests


def _compare_row(label: str, scenario: Scenario, request: Optional[WhatIfRequest]) -> dict:
    try:
        variant = scenario if request is None else apply_what_if(scenario, request)
        result = run(variant)
    except ScenarioError as exc:
        return {"label": label, "error": str(exc)}
    return {
        "label": label,
        "error": None,
        "outcome": result.outcome,
        "detection": (
            None
            if result.detection is None
            else {"node_id": result.detection.node_id, "cycle": result.detection.cycle}
        ),
        "cycles": result.cycles,
        "mean_f_c": statistics.fmean(r.f_c for r in result.records),
        "wall_time_s": result.wall_time_s,
    }


def _format_compare_text(rows: Sequence[dict]) -> str:
    header = f"{'label':<16} {'outcome':<10} {'detected':<10} {'cycles':>6} {'mean_f_c':>9} {'wall_s':>7}"
    lines = [header, "-" * len(header)]
    for row in rows:
        if row.get("error") is not None:
            lines.append(f"{row['label']:<16} failed: {row['error']}")
            continue
        detected = "-"
        if row["detection"] is not None:
            detected = f"{row['detection']['node_id']}@{row['detection']['cycle']}"
        lines.append(
            f"{row['label']:<16} {row['outcome']:<10} {detected:<10} "
            f"{row['cycles']:>6d} {row['mean_f_c']:>9.4f} {row['wall_time_s']:>7.2f}"
        )
    return "\n".join(lines)


def cmd_compare(args: argparse.Namespace) -> int:
    try:
        scenario = _load_base(args)
        requests = _load_variants(args.variants) if args.variants else []
    except ScenarioParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ScenarioError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        return _fail(EXIT_RUNTIME, f"cannot read input: {exc}")

    rows = [_compare_row("base", scenario, None)]
    rows.extend(_compare_row(request.label, scenario, request) for request in requests)
    document = {"type": "comparison", "format_version": FORMAT_VERSION, "rows": rows}

    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as handle:
                json.dump(document, handle, indent=2, sort_keys=True)
                handle.write("\n")
        except OSError as exc:
            return _fail(EXIT_RUNTIME, f"cannot write output: {exc}")
    if args.format == "json":
        print(canonical_json(document))
    else:
        print(_format_compare_text(rows))
    return EXIT_OK


def _parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ValueError(f"bind address must look like host:port, got {bind!r}")
    return host, int(port)


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        host, port = _parse_bind(args.bind)
    except ValueError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    if not os.path.isdir(args.scenarios):
        return _fail(EXIT_RUNTIME, f"scenario directory not readable: {args.scenarios}")
    import uvicorn

    from .service import create_app

    app = create_app(scenario_dir=args.scenarios)
    uvicorn.run(app, host=host, port=port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtnplan",
        description=(
            "Greedy placement optimizer for unmanned-vehicle networks with "
            "disruption-tolerant communication requirements."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--scenario",
            required=True,
            help=f"scenario file path or packaged name ({', '.join(REFERENCE_NAMES)})",
        )
        p.add_argument("--max-cycles", type=int, default=None, help="override the scenario cycle budget")

    p_run = sub.add_parser("run", help="execute one scenario and print its outcome")
    add_scenario_args(p_run)
    p_run.add_argument("--out", default=None, help="write the NDJSON record stream here")
    p_run.add_argument("--format", choices=("text", "json"), default="text")
    p_run.set_defaults(func=cmd_run)

    p_validate = sub.add_parser("validate", help="check a scenario file without running it")
    add_scenario_args(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_compare = sub.add_parser("compare", help="run what-if variants and tabulate outcomes")
    add_scenario_args(p_compare)
    p_compare.add_argument("--variants", default=None, help="JSON file with a list of what-if variants")
    p_compare.add_argument("--out", default=None, help="write the machine-readable comparison here")
    p_compare.add_argument("--format", choices=("text", "json"), default="text")
    p_compare.set_defaults(func=cmd_compare)

    p_serve = sub.add_parser("serve", help="serve the HTTP API for the planner UI")
    p_serve.add_argument(
        "--bind",
        default=os.environ.get(BIND_ENV, DEFAULT_BIND),
        help=f"host:port to listen on (default ${BIND_ENV} or {DEFAULT_BIND})",
    )
    p_serve.add_argument(
        "--scenarios",
        default=packaged_scenario_dir(),
        help="directory of scenario files to expose (default: packaged set)",
    )
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
