"""Command-line entry point.

Exit codes are CI-friendly: 0 means success (including a passing
validation), 2 means the validation verdict was "fail", and 1 means any
operational error. Drift failures are therefore distinguishable from
crashes in pipelines, the same way diff-like tools behave.

Documents go to stdout (or --out); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Optional

from .canon import canonical_bytes
from .config import DriftConfig, load_config, load_config_file
from .errors import ConfigError, DriftwatchError
from .notify import emit_alerts
from .pipeline import profile_table, validate_table
from .registry import (
    best_version,
    compare_versions,
    get_lineage,
    list_versions,
    log_version,
)
from .render import render_report
from .server import serve
from .store import Store
from .summarize import summary_doc, summary_from_doc
from .table import read_table_file

CONFIG_ENV_VAR = "DRIFTWATCH_CONFIG"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DRIFT_FAIL = 2

_PROPORTION_RE = re.compile(r"^(\d+)/(\d+)$")


class _CliParser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit-1 errors, not exit-2."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _resolve_config(path: Optional[str]) -> DriftConfig:
    if path:
        return load_config_file(path)
    env_path = os.environ.get(CONFIG_ENV_VAR)
    if env_path:
        return load_config_file(env_path)
    return load_config(None)


def _parse_kv(option: str, text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise ConfigError(f"{option} expects key=value, got {text!r}")
    return key, value


def _parse_metric(text: str):
    key, raw = _parse_kv("--metric", text)
    if raw.startswith("["):
        try:
            return key, json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--metric {key}: bad samples list: {exc.msg}") from exc
    match = _PROPORTION_RE.match(raw)
    if match:
        return key, {"successes": int(match.group(1)), "trials": int(match.group(2))}
    try:
        return key, float(raw)
    except ValueError:
        raise ConfigError(
            f"--metric {key}: value must be a number, s/t, or [v1,v2,...], got {raw!r}"
        ) from None


def _write_doc(doc, out: Optional[str]) -> None:
    data = canonical_bytes(doc)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data + b"\n")
        sys.stdout.buffer.flush()


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="driftwatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_CliParser)

    p = sub.add_parser("profile", help="summarize a dataset into a baseline document")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("validate", help="compare a dataset against a stored baseline")
    p.add_argument("--baseline", required=True, metavar="SUMMARY_JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--render", choices=["json", "text"], default="json")
    p.add_argument("--notify", action="store_true")

    registry = sub.add_parser("registry", help="model version registry")
    reg_sub = registry.add_subparsers(dest="registry_command", required=True,
                                      parser_class=_CliParser)

    p = reg_sub.add_parser("log", help="record a new model version")
    p.add_argument("--store", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--param", action="append", default=[], metavar="K=V")
    p.add_argument("--metric", action="append", default=[],
                   metavar="K=V|K=S/T|K=[V1,V2,...]")
    p.add_argument("--parent", action="append", type=int, default=[], metavar="N")
    p.add_argument("--feature", action="append", default=[], metavar="NAME")

    for name in ("list", "lineage"):
        p = reg_sub.add_parser(name)
        p.add_argument("--store", required=True)
        p.add_argument("--model", required=True)

    p = reg_sub.add_parser("compare", help="A/B/n comparison of versions")
    p.add_argument("--store", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--versions", required=True, metavar="A,B[,C...]")
    p.add_argument("--direction", choices=["max", "min"], default="max")
    p.add_argument("--config", default=None)

    p = reg_sub.add_parser("best", help="version with the best mean metric")
    p.add_argument("--store", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--metric", required=True)
    p.add_argument("--direction", choices=["max", "min"], default="max")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--store", required=True)
    p.add_argument("--addr", default="127.0.0.1:8080")
    p.add_argument("--config", default=None)

    return parser


def _cmd_profile(args) -> int:
    cfg = _resolve_config(args.config)
    table = read_table_file(args.input, args.format)
    summary = profile_table(table, cfg)
    _write_doc(summary_doc(summary), args.out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = _resolve_config(args.config)
    with open(args.baseline, "r", encoding="utf-8") as fh:
        baseline = summary_from_doc(json.load(fh))
    table = read_table_file(args.input)
    report, _current = validate_table(baseline, table, cfg)

    rendered = render_report(report, args.render)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(rendered)
    else:
        sys.stdout.buffer.write(rendered if args.render == "text" else rendered + b"\n")
        sys.stdout.buffer.flush()

    if args.notify:
        outcome = emit_alerts(report, cfg)
        print(f"notify: {outcome.status} after {outcome.attempts} attempt(s)",
              file=sys.stderr)
    return EXIT_DRIFT_FAIL if report["verdict"] == "fail" else EXIT_OK


def _cmd_registry(args) -> int:
    store = Store(args.store)
    command = args.registry_command
    if command == "log":
        draft = {
            "params": dict(_parse_kv("--param", text) for text in args.param),
            "metrics": dict(_parse_metric(text) for text in args.metric),
            "parent_versions": args.parent,
            "feature_inputs": args.feature,
        }
        _write_doc(log_version(store, args.model, draft), None)
        return EXIT_OK
    if command == "list":
        _write_doc(
            {"model_name": args.model, "versions": list_versions(store, args.model)}, None
        )
        return EXIT_OK
    if command == "lineage":
        _write_doc(get_lineage(store, args.model), None)
        return EXIT_OK
    if command == "compare":
        cfg = _resolve_config(args.config)
        try:
            versions = [int(v) for v in args.versions.split(",") if v != ""]
        except ValueError:
            raise ConfigError(f"--versions must be comma-separated integers, got {args.versions!r}")
        doc = compare_versions(store, args.model, args.metric, versions, args.direction, cfg)
        _write_doc(doc, None)
        return EXIT_OK
    if command == "best":
        version = best_version(store, args.model, args.metric, args.direction)
        print(version)
        return EXIT_OK
    raise ConfigError(f"unknown registry command: {command!r}")


def _cmd_serve(args) -> int:
    cfg = _resolve_config(args.config)
    store = Store(args.store)
    serve(store, args.addr, cfg)
    return EXIT_OK


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "profile":
            return _cmd_profile(args)
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "registry":
            return _cmd_registry(args)
        if args.command == "serve":
            return _cmd_serve(args)
        raise ConfigError(f"unknown command: {args.command!r}")
    except DriftwatchError as exc:
        print(f"driftwatch: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"driftwatch: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(f"driftwatch: error: invalid JSON input: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
