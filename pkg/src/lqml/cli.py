"""Command-line entry point: ``lqml check|assess|export|to-sparql``.

Diagnostics go to standard error; Turtle and SPARQL go to standard output or
the ``--output`` file. Exit status is 0 on success, 1 when a blueprint is
rejected or a metric cannot be computed, 2 on I/O or dataset syntax errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from .engine import MetricFailure, ObservationRecord, assess
from .errors import (
    LexError,
    LqmlError,
    NTriplesSyntaxError,
    ParseError,
    UntranslatableError,
    ValidationError,
)
from .lbo import export_turtle
from .model import Blueprint, ExtensionRegistry, default_registry
from .parser import load_blueprints
from .rdfio import open_ntriples
from .rdfio.observations import observations_document
from .sparql import to_sparql

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_IO = 2

TIMESTAMP_ENV = "LQML_FIXED_TIMESTAMP"


class _Abort(Exception):
    def __init__(self, status: int) -> None:
        self.status = status


@dataclass
class CliConfig:
    command: str
    blueprint_paths: list[str]
    dataset_path: Optional[str] = None
    output_path: Optional[str] = None
    dataset_id: Optional[str] = None
    registry: ExtensionRegistry = field(default_factory=default_registry)

    def __post_init__(self) -> None:
        if self.command == "assess" and not self.dataset_path:
            raise ValueError("assess needs a dataset")
        if not self.blueprint_paths:
            raise ValueError(f"{self.command} needs at least one blueprint file")


def _error(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _report(path: str, exc: LqmlError) -> None:
    if isinstance(exc, ValidationError):
        for v in exc.violations:
            where = f"{v.line}:{v.column}:" if v.line is not None else ""
            print(f"{path}:{where} error: {v.kind}: {v.message}", file=sys.stderr)
    elif isinstance(exc, LexError):
        print(f"{path}:{exc.line}:{exc.column}: error: {exc.message}", file=sys.stderr)
    elif isinstance(exc, ParseError):
        print(
            f"{path}:{exc.line}:{exc.column}: error: expected {exc.expected}, found {exc.found}",
            file=sys.stderr,
        )
    else:
        print(f"{path}: error: {exc}", file=sys.stderr)


def _load_file(path: str, registry: ExtensionRegistry) -> list[Blueprint]:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        _error(f"cannot read {path}: {exc}")
        raise _Abort(EXIT_IO)
    try:
        return load_blueprints(source, registry)
    except LqmlError as exc:
        _report(path, exc)
        raise _Abort(EXIT_FAILURE)


def _load_all(config: CliConfig) -> list[Blueprint]:
    blueprints: list[Blueprint] = []
    status = EXIT_OK
    for path in config.blueprint_paths:
        try:
            blueprints.extend(_load_file(path, config.registry))
        except _Abort as abort:
            status = max(status, abort.status)
    if status != EXIT_OK:
        raise _Abort(status)
    seen: dict[str, int] = {}
    for b in blueprints:
        seen[b.name] = seen.get(b.name, 0) + 1
    duplicates = sorted(n for n, k in seen.items() if k > 1)
    if duplicates:
        _error("blueprint names must be unique across files: " + ", ".join(duplicates))
        raise _Abort(EXIT_FAILURE)
    return blueprints


def _emit(config: CliConfig, text: str) -> None:
    if config.output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(config.output_path).write_text(text, encoding="utf-8")
    except OSError as exc:
        _error(f"cannot write {config.output_path}: {exc}")
        raise _Abort(EXIT_IO)


def _timestamp() -> Optional[datetime]:
    raw = os.environ.get(TIMESTAMP_ENV)
    if not raw:
        return None
    try:
        when = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        _error(f"{TIMESTAMP_ENV}={raw!r} is not an ISO 8601 timestamp")
        raise _Abort(EXIT_IO)
    return when if when.tzinfo else when.replace(tzinfo=timezone.utc)


def run_check(config: CliConfig) -> int:
    status = EXIT_OK
    for path in config.blueprint_paths:
        try:
            found = _load_file(path, config.registry)
        except _Abort as abort:
            status = max(status, abort.status)
            continue
        noun = "blueprint" if len(found) == 1 else "blueprints"
        print(f"{path}: {len(found)} {noun} OK", file=sys.stderr)
    return status


def run_assess(config: CliConfig) -> int:
    blueprints = _load_all(config)
    computed_at = _timestamp()
    dataset = config.dataset_path
    assert dataset is not None
    dataset_id = config.dataset_id or os.path.basename(dataset)
    try:
        with open_ntriples(dataset) as source:
            outcomes = assess(blueprints, source, dataset_id, config.registry, computed_at)
    except NTriplesSyntaxError as exc:
        print(f"{dataset}:{exc.line}: error: {exc.reason}", file=sys.stderr)
        return EXIT_IO
    except (OSError, UnicodeDecodeError) as exc:
        _error(f"cannot read {dataset}: {exc}")
        return EXIT_IO

    records = [o for o in outcomes if isinstance(o, ObservationRecord)]
    for outcome in outcomes:
        if isinstance(outcome, MetricFailure):
            kind = type(outcome.error).__name__
            print(f"<{outcome.metric_uri}> failed: {kind}: {outcome.message}", file=sys.stderr)
        else:
            print(f"<{outcome.metric_uri}> = {outcome.decimal}", file=sys.stderr)
    _emit(config, observations_document(records).serialize())
    return EXIT_OK if len(records) == len(outcomes) else EXIT_FAILURE


def run_export(config: CliConfig) -> int:
    _emit(config, export_turtle(_load_all(config)))
    return EXIT_OK


def run_to_sparql(config: CliConfig) -> int:
    blueprints = _load_all(config)
    chunks = []
    for b in blueprints:
        try:
            query = to_sparql(b.match_expr)
        except UntranslatableError as exc:
            _error(f"blueprint {b.name!r}: {exc}")
            return EXIT_FAILURE
        chunks.append(f"# {b.name}\n{query.text}")
    _emit(config, "\n".join(chunks))
    return EXIT_OK


COMMANDS = {
    "check": run_check,
    "assess": run_assess,
    "export": run_export,
    "to-sparql": run_to_sparql,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lqml", description="Work with LQML quality-metric blueprints.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and validate blueprint files")
    p.add_argument("blueprints", nargs="+", metavar="BLUEPRINT")

    p = sub.add_parser("assess", help="evaluate blueprints over an N-Triples dataset")
    p.add_argument("paths", nargs="+", metavar="PATH", help="blueprint files followed by the dataset")
    p.add_argument("--output", help="write observation Turtle here instead of stdout")
    p.add_argument("--dataset-id", help="dataset identifier recorded on observations (default: file name)")

    for name, help_text in (("export", "write blueprints as LBO Turtle"), ("to-sparql", "translate match clauses to SPARQL")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("blueprints", nargs="+", metavar="BLUEPRINT")
        p.add_argument("--output", help="write here instead of stdout")
    return parser


def _config(args: argparse.Namespace, parser: argparse.ArgumentParser, registry: Optional[ExtensionRegistry]) -> CliConfig:
    registry = registry if registry is not None else default_registry()
    if args.command == "assess":
        if len(args.paths) < 2:
            parser.error("assess needs at least one blueprint file and a dataset")
        return CliConfig(
            "assess", args.paths[:-1], args.paths[-1], args.output, args.dataset_id, registry
        )
    return CliConfig(args.command, list(args.blueprints), output_path=getattr(args, "output", None), registry=registry)


def main(argv: Optional[Sequence[str]] = None, registry: Optional[ExtensionRegistry] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config(args, parser, registry)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    try:
        return COMMANDS[config.command](config)
    except _Abort as abort:
        return abort.status

if __name__ == "__main__":
    sys.exit(main())
