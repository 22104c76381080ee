"""Command-line front end.

Exit codes: 0 pass/complete, 1 check failed, 2 bad input, 3 degenerate
(every sampled point umbilic).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .blair import lemma_consistency_check
from .contact import compatibility_check
from .errors import DomainError, GeometryError, InvalidParams, NotCompatible, NotPositiveDefinite, ParseError, UmbilicPoint, UnboundParameter
from .gallery import GALLERY, CounterexampleParams, gallery_pair, section4_verdict
from .local import OneFormField, Pair, local_geometry
from .riemann import MetricField, christoffel, riemann_tensor, sectional_curvature
from .rng import SplitMix64
from .shape import umbilic_scan

EXIT_OK, EXIT_FAILED, EXIT_BAD_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3


class InputError(Exception):
    """Bad command-line input or pair file; maps to exit code 2."""


# --------------------------------------------------------------------------
# JSON with 17 significant digits


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return "null"
        text = format(v, ".17g")
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    return _encode(obj) + "\n"


def fmt(v) -> str:
    return "" if v is None else format(float(v), ".17g")


# --------------------------------------------------------------------------
# Pair specs


def load_pair_spec(path: str, overrides: dict[str, float]) -> Pair:
    """Read a PairSpec JSON file.

    Metric entries below the diagonal may be ``null`` and are mirrored; when
    both (i, j) and (j, i) are given they must be textually equal.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    return pair_from_spec(doc, overrides)


def pair_from_spec(doc, overrides: dict[str, float] | None = None) -> Pair:
    if not isinstance(doc, dict):
        raise InputError("pair spec must be a JSON object")
    for key in ("metric", "alpha"):
        if key not in doc:
            raise InputError(f"pair spec is missing {key!r}")
    name = doc.get("name", "unnamed")
    params = doc.get("parameters", {}) or {}
    if not isinstance(params, dict) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in params.values()):
        raise InputError("'parameters' must map names to numbers")
    params = {str(k): float(v) for k, v in params.items()}
    for k in overrides or {}:
        if k not in params:
            raise InputError(f"-P {k}: no such parameter in the pair spec")
    params.update(overrides or {})

    metric = doc["metric"]
    if not (isinstance(metric, list) and len(metric) == 3 and all(isinstance(r, list) and len(r) == 3 for r in metric)):
        raise InputError("'metric' must be a 3x3 array of expression strings")
    for i in range(3):
        for j in range(3):
            e = metric[i][j]
            if e is not None and not isinstance(e, str):
                raise InputError(f"metric entry ({i},{j}) must be a string or null")
            if e is not None and metric[j][i] is not None and e.strip() != metric[j][i].strip():
                raise InputError(f"metric entries ({i},{j}) and ({j},{i}) differ")
    alpha = doc["alpha"]
    if not (isinstance(alpha, list) and len(alpha) == 3 and all(isinstance(a, str) for a in alpha)):
        raise InputError("'alpha' must be an array of three expression strings")

    dom = doc.get("domain", {"min": [-1, -1, -1], "max": [1, 1, 1]})
    try:
        lo = tuple(float(c) for c in dom["min"])
        hi = tuple(float(c) for c in dom["max"])
    except (KeyError, TypeError, ValueError):
        raise InputError("'domain' must be {\"min\": [3 numbers], \"max\": [3 numbers]}") from None
    if len(lo) != 3 or len(hi) != 3 or any(a > b for a, b in zip(lo, hi)):
        raise InputError("'domain' must be a nonempty box in three coordinates")

    try:
        mf = MetricField.from_strings(metric, params)
        af = OneFormField.from_strings(alpha, params)
    except (ParseError, ValueError) as exc:
        raise InputError(str(exc)) from None
    return Pair(str(name), mf, af, params, lo, hi)


def _parse_params(items: list[str] | None) -> dict[str, float]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InputError(f"-P expects key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"-P {key}: {value!r} is not a number") from None
    return out


def _resolve_pair(args) -> Pair:
    overrides = _parse_params(args.param)
    if args.input and args.gallery:
        raise InputError("use either --input or --gallery, not both")
    if args.input:
        return load_pair_spec(args.input, overrides)
    if args.gallery:
        try:
            return gallery_pair(args.gallery, overrides)
        except InvalidParams as exc:
            raise InputError(str(exc)) from None
    raise InputError("one of --input or --gallery is required")


def _pair_header(pair: Pair) -> dict:
    return {"name": pair.name, "parameters": dict(pair.params), "domain": {"min": list(pair.domain_min), "max": list(pair.domain_max)}}


def _parse_triple(text: str, flag: str, n: int = 3) -> tuple[float, ...]:
    try:
        vals = tuple(float(c) for c in text.split(","))
    except ValueError:
        raise InputError(f"{flag} expects {n} comma-separated numbers") from None
    if len(vals) != n:
        raise InputError(f"{flag} expects {n} comma-separated numbers")
    return vals


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


# --------------------------------------------------------------------------
# Commands


def cmd_check(args, out) -> int:
    if args.format != "json":
        raise InputError("check only supports --format json")
    pair = _resolve_pair(args)
    rng = SplitMix64(args.seed)
    pts = pair.sample(rng, args.points)
    report = compatibility_check(pair, pts, rng)
    doc = {
        "command": "check",
        "tool_version": __version__,
        "seed": args.seed,
        "pair": _pair_header(pair),
        "compatible": report.is_compatible,
        "failed_predicates": report.failed_predicates,
        "predicates": report.predicates,
        "k": report.k,
        "k_spread": report.k_spread,
        "records": [vars(r) for r in report.points],
    }
    out.write(dumps(doc))
    return EXIT_OK if report.is_compatible else EXIT_FAILED


def cmd_lemma_verify(args, out) -> int:
    pair = _resolve_pair(args)
    rng = SplitMix64(args.seed)
    pts = pair.sample(rng, args.points)
    records, umbilic, failure = [], [], None
    for p in pts:
        try:
            records.append(lemma_consistency_check(pair, p, args.tol).to_dict())
        except UmbilicPoint:
            umbilic.append(list(p))
        except NotCompatible as exc:
            failure = str(exc)
            break
    max_res = max((r["max_residual"] for r in records), default=None)
    web = [r["webster_residual"] for r in records if r["webster_residual"] is not None]
    if failure:
        code = EXIT_FAILED
    elif not records:
        code = EXIT_DEGENERATE
    else:
        code = EXIT_OK if max_res < args.tol else EXIT_FAILED
    if args.format == "csv":
        rows = [[*r["point"], r["max_residual"], r["lambda"], r["k"], r["N_lambda"], r["webster_K"], r["webster_K_formula"]] for r in records]
        out.write(_csv_text(["x", "y", "z", "max_residual", "lambda", "k", "N_lambda", "webster_K", "webster_K_formula"], rows))
        return code
    doc = {
        "command": "lemma-verify",
        "tool_version": __version__,
        "seed": args.seed,
        "tol": args.tol,
        "pair": _pair_header(pair),
        "passed": code == EXIT_OK,
        "error": failure,
        "max_residual": max_res,
        "max_webster_residual": max(web, default=None),
        "evaluated_points": len(records),
        "umbilic_points": umbilic,
        "records": records,
    }
    out.write(dumps(doc))
    return code


def cmd_verdict(args, out) -> int:
    params = _parse_params(args.param)
    unknown = set(params) - {"A", "B"}
    if unknown:
        raise InputError(f"verdict takes only -P A=... and -P B=..., got {sorted(unknown)}")
    if args.radius <= 0 or args.grid < 1:
        raise InputError("--radius must be positive and --grid at least 1")
    try:
        cp = CounterexampleParams(params.get("A", 1.0), params.get("B", 2.0))
    except InvalidParams as exc:
        raise InputError(str(exc)) from None
    report = section4_verdict(cp, args.radius, args.grid, args.seed)
    header = ["x", "y", "z", "K_e1e2", "K_e1e3", "K_e2e3", "min_random_sectional", "min_sectional", "max_residual_section4"]
    rows = [[*r["point"], *r["frame_sectional"], r["min_random_sectional"], r["min_sectional"], r["max_residual_section4"]] for r in report.records]
    if args.csv:
        Path(args.csv).write_text(_csv_text(header, rows), encoding="utf-8")
    if args.format == "csv":
        out.write(_csv_text(header, rows))
    else:
        doc = {"command": "verdict", "tool_version": __version__, **report.to_dict()}
        out.write(dumps(doc))
    return EXIT_OK


def cmd_scan_umbilic(args, out) -> int:
    pair = _resolve_pair(args)
    if args.box:
        box = _parse_triple(args.box, "--box", 6)
        lo, hi = box[:3], box[3:]
    else:
        lo, hi = pair.domain_min, pair.domain_max
    if any(a > b for a, b in zip(lo, hi)):
        raise InputError("--box must have min <= max in every coordinate")
    scan = umbilic_scan(pair, lo, hi, args.grid)
    if args.format == "csv":
        rows = [[*r["point"], r["lambda"], r["half_gap"], "" if r["umbilic"] is None else int(r["umbilic"])] for r in scan.records]
        out.write(_csv_text(["x", "y", "z", "lambda", "half_gap", "umbilic"], rows))
        return EXIT_OK
    doc = {
        "command": "scan-umbilic",
        "tool_version": __version__,
        "pair": _pair_header(pair),
        "box": {"min": list(lo), "max": list(hi)},
        "grid": args.grid,
        "grid_points": scan.grid_points,
        "umbilic_count": len(scan.umbilic_points),
        "min_lambda": scan.min_lambda,
        "max_lambda": scan.max_lambda,
        "umbilic_points": [list(p) for p in scan.umbilic_points],
        "skipped": scan.skipped,
    }
    out.write(dumps(doc))
    return EXIT_OK


def cmd_gallery(args, out) -> int:
    doc = {
        "command": "gallery",
        "tool_version": __version__,
        "entries": [{"name": e.name, "description": e.description, "default_parameters": e.defaults} for e in GALLERY.values()],
    }
    out.write(dumps(doc))
    return EXIT_OK


def cmd_curvature(args, out) -> int:
    pair = _resolve_pair(args)
    p = _parse_triple(args.at, "--at")
    lg = local_geometry(pair, p)
    G, _ = christoffel(lg.mj)
    R = riemann_tensor(lg.mj)
    E = np.eye(3)
    planes = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        planes["xyz"[i] + "xyz"[j]] = sectional_curvature(lg.mj, E[i], E[j], R)
    doc = {
        "command": "curvature",
        "tool_version": __version__,
        "pair": _pair_header(pair),
        "point": list(p),
        "metric": lg.mj.g,
        "christoffel": G,
        "riemann_lowered": R,
        "riemann_convention": "R[i][j][k][l] = <R(d_i, d_j) d_k, d_l>, R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]",
        "coordinate_plane_sectional": planes,
    }
    out.write(dumps(doc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contactmetric", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def pair_args(p):
        p.add_argument("--input", help="PairSpec JSON file")
        p.add_argument("--gallery", help="built-in pair name")
        p.add_argument("-P", "--param", action="append", metavar="KEY=VALUE", help="parameter override (repeatable)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("check", help="compatibility of metric and contact form")
    pair_args(p)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lemma-verify", help="principal-frame curvature matrix against direct curvature")
    pair_args(p)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_lemma_verify)

    p = sub.add_parser("verdict", help="audit negative curvature of the counterexample family near 0")
    p.add_argument("-P", "--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--radius", type=float, default=0.25)
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--csv", metavar="PATH", help="also write the per-point CSV here")
    p.set_defaults(func=cmd_verdict)

    p = sub.add_parser("scan-umbilic", help="grid scan for umbilic points of ker alpha")
    pair_args(p)
    p.add_argument("--box", help="xmin,ymin,zmin,xmax,ymax,zmax (default: the pair's domain)")
    p.add_argument("--grid", type=int, default=11)
    p.set_defaults(func=cmd_scan_umbilic)

    p = sub.add_parser("gallery", help="list built-in pairs")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("curvature", help="Christoffel symbols, Riemann tensor and sectional curvatures at a point")
    pair_args(p)
    p.add_argument("--at", required=True, help="x,y,z")
    p.set_defaults(func=cmd_curvature)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err), contextlib.redirect_stdout(out):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "points", 1) < 1:
        err.write("error: --points must be at least 1\n")
        return EXIT_BAD_INPUT
    try:
        return args.func(args, out)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    except (NotPositiveDefinite, DomainError, UnboundParameter, InvalidParams, ParseError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_BAD_INPUT
    except GeometryError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
