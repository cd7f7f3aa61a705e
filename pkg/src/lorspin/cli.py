"""Command line: ``lorspin generate | verify | export``.

Exit codes: 0 success, 1 invariant failure (the report is still written),
2 schema or input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InputError, LorspinError, NumericalFailure, SchemaError
from .formats import dump_json, read_result, write_csv, write_json, write_obj
from .pipeline import GenerationConfig, generate
from .report import convergence_orders, failures, invariant_report

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _describe(exc: Exception) -> str:
    msg = f"{type(exc).__name__}: {exc}"
    loc = getattr(exc, "location", None)
    if loc is not None:
        msg += f" at (s, t) = ({loc[0]:.6g}, {loc[1]:.6g})"
    return msg


def _load_config(path) -> GenerationConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config {path} is not valid JSON: {exc}") from exc
    return GenerationConfig.from_dict(data)


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _write_result(result, out, report=None) -> None:
    if Path(out).suffix.lower() == ".json":
        write_json(result, out, report)
    else:
        write_csv(result, out, report)


def cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    result = generate(cfg)
    report = invariant_report(result)
    _write_result(result, args.out, report)
    bad = failures(report)
    for key, item in sorted(bad.items()):
        print(f"warning: {key} = {item['value']:.3e} exceeds {item['bound']:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    result = read_result(args.input)
    report = invariant_report(result)
    bad = failures(report, args.tol)
    payload = {"report": report, "failures": bad, "tolerance_factor": args.tol, "passed": not bad}
    if args.resolution_pair:
        fine = invariant_report(read_result(args.resolution_pair))
        coarse, fine_rep = report, fine
        if max(fine["grid"]["h_s"], fine["grid"]["h_t"]) > max(report["grid"]["h_s"], report["grid"]["h_t"]):
            coarse, fine_rep = fine, report
        try:
            payload["orders"] = convergence_orders(coarse, fine_rep)
        except ValueError as exc:
            raise InputError(f"--resolution-pair needs two different grid spacings ({exc})") from exc
        payload["fine_report"] = fine
    _emit(dump_json(payload), args.out)
    for key, item in sorted(bad.items()):
        print(f"invariant {key} = {item['value']:.3e} exceeds {item['bound']:.3e}", file=sys.stderr)
    return EXIT_INVARIANT if bad else EXIT_OK


def _parse_projection(text: str) -> np.ndarray:
    path = Path(text)
    if path.exists():
        text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [float(v) for v in text.replace(";", ",").split(",")]
        except ValueError as exc:
            raise InputError(f"cannot parse projection {text!r}") from exc
    arr = np.asarray(data, float)
    if arr.size == 12:
        arr = arr.reshape(3, 4)
    return arr


def cmd_export(args) -> int:
    result = read_result(args.input)
    fmt = args.format
    if fmt != "obj" and args.projection is not None:
        raise InputError("--projection only applies to --format obj")
    if fmt == "obj":
        proj = None if args.projection is None else _parse_projection(args.projection)
        write_obj(result, args.out, proj)
    elif fmt == "csv":
        write_csv(result, args.out, invariant_report(result))
    else:
        write_json(result, args.out, invariant_report(result))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lorspin", description="Spinor generation and verification of surfaces in R^{2,2}.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a surface from a JSON config")
    g.add_argument("config")
    g.add_argument("out", help="output path (.csv with JSON sidecar, or .json)")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="recompute the invariant report of a surface file")
    v.add_argument("input")
    v.add_argument("--resolution-pair", metavar="OTHER", help="same surface at another resolution; reports orders")
    v.add_argument("--tol", type=float, default=1.0, help="multiplier on the tolerance policy (default 1)")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("export", help="convert a surface file to csv, json or an OBJ mesh")
    e.add_argument("input")
    e.add_argument("--format", choices=("csv", "json", "obj"), required=True)
    e.add_argument("--projection", help="3x4 matrix as JSON, 12 comma-separated numbers, or a file")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "tol", 1.0) is not None and not getattr(args, "tol", 1.0) > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, SchemaError) as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, LorspinError) as exc:
        print(f"error: {_describe(exc)}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
