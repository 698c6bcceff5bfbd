"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 computation error,
3 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .algebra import Algebra, eta0, random_traceless
from .config import DEFAULT, RunConfig
from .covariants import recover_quartic
from .errors import ComputationError, InputError
from .idempotents import genericity_report, solve_idempotents
from .plotting import render_quartic
from .quartic_geometry import bitangent_candidates, is_bitangent, min_pairwise_distance
from .reconstruct import PointConfiguration, algebra_from_points
from .verify import full_report

EXIT_OK, EXIT_FAILED, EXIT_COMPUTE, EXIT_INPUT = 0, 1, 2, 3


class _Failed(Exception):
    """Raised to exit with code 1 after emitting a report."""


def eta0_points() -> PointConfiguration:
    th = np.exp(2j * np.pi / 7)
    return PointConfiguration(tuple(np.array([t, t**2, t**4]) for t in th ** np.arange(7)))


# -- I/O ------------------------------------------------------------------


def _read_json(source: str):
    try:
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {source}: {exc}") from exc


def _read_algebra(source: str) -> Algebra:
    data = _read_json(source)
    if not isinstance(data, dict):
        raise InputError("algebra JSON must be an object")
    return Algebra.from_json(data)


def _text_lines(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(_text_lines(v, f"{prefix}{k}."))
        return out
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)) and not _is_pair(obj[0]):
        out = []
        for i, v in enumerate(obj):
            out.extend(_text_lines(v, f"{prefix}{i}."))
        return out
    return [f"{prefix.rstrip('.')}\t{_format_scalar(obj)}"]


def _is_pair(x) -> bool:
    return isinstance(x, list) and len(x) == 2 and all(isinstance(v, float) for v in x)


def _format_scalar(obj) -> str:
    if _is_pair(obj):
        return f"{obj[0]!r}{obj[1]:+}j"
    if isinstance(obj, list) and obj and _is_pair(obj[0]):
        return " ".join(_format_scalar(v) for v in obj)
    return json.dumps(obj)


def _emit(payload, args) -> None:
    if args.format == "text":
        text = "\n".join(_text_lines(payload)) + "\n"
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    base = RunConfig.from_file(args.config) if args.config else DEFAULT
    return base.updated(
        tol_zero=args.tol,
        tol_merge=args.tol_merge,
        tol_pair=args.tol_pair,
        chart_retries=args.retries,
        seed=args.seed,
        format=args.format,
    )


# -- commands -------------------------------------------------------------


def cmd_example(args, cfg):
    if args.name == "eta0":
        return eta0().to_json()
    return eta0_points().to_json()


def cmd_random(args, cfg):
    return random_traceless(cfg.seed, real=args.real).to_json()


def cmd_idempotents(args, cfg):
    alg = _read_algebra(args.input)
    X = solve_idempotents(alg, cfg)
    return {"idempotents": X.to_json(), "genericity": genericity_report(alg, X).to_json()}


def cmd_quartic(args, cfg):
    return recover_quartic(_read_algebra(args.input)).to_json()


def cmd_bitangents(args, cfg):
    alg = _read_algebra(args.input)
    X = solve_idempotents(alg, cfg)
    quartic = recover_quartic(alg)
    lines = bitangent_candidates(alg, X)
    certs = [is_bitangent(quartic, ln, cfg.tol_pair) for ln in lines]
    payload = {
        "lines": [ln.to_json() for ln in lines],
        "certificates": [c.to_json() for c in certs],
        "min_line_distance": min_pairwise_distance(lines),
        "all_bitangent": all(c.is_bitangent for c in certs),
    }
    if not payload["all_bitangent"]:
        raise _Failed(payload)
    return payload


def _verify_one(alg: Algebra, cfg: RunConfig, label: str) -> dict:
    try:
        report = full_report(alg, cfg)
    except ComputationError as exc:
        report = {"pass": False, "error": str(exc)}
    report["input"] = label
    return report


def cmd_verify(args, cfg):
    jobs = [(_read_algebra(src), src) for src in args.inputs]
    jobs += [(random_traceless(cfg.seed + k), f"random:{cfg.seed + k}") for k in range(args.random)]
    if not jobs:
        raise InputError("verify needs at least one input file or --random N")
    reports = [_verify_one(alg, cfg, label) for alg, label in jobs]
    if args.figure:
        alg = jobs[0][0]
        _plot(alg, cfg, args.figure, args.extent)
    payload = reports[0] if len(reports) == 1 else {"reports": reports, "pass": all(r["pass"] for r in reports)}
    if len(reports) == 1 and "error" in reports[0]:
        raise ComputationError(reports[0]["error"])
    if not payload["pass"]:
        raise _Failed(payload)
    return payload


def cmd_invert(args, cfg):
    data = _read_json(args.input)
    if not isinstance(data, dict):
        raise InputError("points JSON must be an object")
    return algebra_from_points(PointConfiguration.from_json(data)).to_json()


def _plot(alg: Algebra, cfg: RunConfig, path, extent: float) -> Path:
    if not extent > 0:
        raise InputError("viewport extent must be positive")
    quartic = recover_quartic(alg)
    lines, certs = [], []
    try:
        X = solve_idempotents(alg, cfg)
        lines = bitangent_candidates(alg, X)
        certs = [is_bitangent(quartic, ln, cfg.tol_pair) for ln in lines]
    except ComputationError:
        pass
    return render_quartic(quartic.form, lines, certs, path, extent=extent)


def cmd_plot(args, cfg):
    alg = _read_algebra(args.input)
    out = args.out or "quartic.svg"
    path = _plot(alg, cfg, out, args.extent)
    args.out = None
    return {"figure": str(path)}


# -- argument parsing -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="residual tolerance (tol_zero)")
    common.add_argument("--tol-merge", type=float, default=None)
    common.add_argument("--tol-pair", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--retries", type=int, default=None, help="random chart retries")
    common.add_argument("--format", choices=["json", "text"], default=None)
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--config", default=None, help="JSON file with RunConfig fields")

    parser = argparse.ArgumentParser(prog="quartalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", parents=[common], help="emit a fixture")
    p.add_argument("name", choices=["eta0", "eta0-points"])
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("random", parents=[common], help="seeded random trace-free algebra")
    p.add_argument("--real", action="store_true", help="real structure constants")
    p.set_defaults(func=cmd_random)

    for name, func, helptext in [
        ("idempotents", cmd_idempotents, "generalized idempotents and genericity"),
        ("quartic", cmd_quartic, "the associated plane quartic"),
        ("bitangents", cmd_bitangents, "the 28 candidate lines and their certificates"),
    ]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("input", help="algebra JSON file, or - for stdin")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="full verification report")
    p.add_argument("inputs", nargs="*", help="algebra JSON files")
    p.add_argument("--random", type=int, default=0, metavar="N", help="also verify N seeded random algebras")
    p.add_argument("--figure", default=None, help="also write an SVG of the first input")
    p.add_argument("--extent", type=float, default=2.0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invert", parents=[common], help="algebra from seven points")
    p.add_argument("input", help="points JSON file, or - for stdin")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("plot", parents=[common], help="SVG of the real quartic and its lines")
    p.add_argument("input")
    p.add_argument("--extent", type=float, default=2.0, help="half-width of the square viewport")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        args.format = cfg.format
        payload = args.func(args, cfg)
    except _Failed as failed:
        _emit(failed.args[0], args)
        return EXIT_FAILED
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    _emit(payload, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
