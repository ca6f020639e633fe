"""Command-line entry point.

    geolab constant <spec> <name> [--t T] [--method M] [optimizer flags]
    geolab curve <spec> {czi,z,rho,delta} --grid N --out PATH
    geolab verify [--space SPEC]... [--ids ID,...] --out PATH [--timings]

Exit codes: 0 success, 1 an asserted claim failed, 2 I/O error, 64 usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import constants as C
from .optimize import OptConfig
from .spaces import DEFAULT_CATALOG, SpaceSpecError, format_space_spec, parse_space_spec
from .verify import UnknownClaimError, all_asserted_pass, report_json, run_claims

EXIT_OK, EXIT_CLAIM, EXIT_IO, EXIT_USAGE = 0, 1, 2, 64

CSV_HEADER = ("space", "constant", "method", "t", "value", "lower_bound", "upper_bound")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_cfg_flags(p):
    d = OptConfig()
    g = p.add_argument_group("optimizer")
    g.add_argument("--grid-resolution", type=int, default=d.grid_resolution)
    g.add_argument("--top-cells", type=int, default=d.top_cells)
    g.add_argument("--step-tol", type=float, default=d.step_tol)
    g.add_argument("--max-evals", type=int, default=d.max_evals)
    g.add_argument("--extra-starts", type=int, default=d.extra_starts)
    g.add_argument("--seed", type=int, default=None,
                   help="overrides GEOLAB_SEED; default 0")


def _cfg(args) -> OptConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("GEOLAB_SEED")
        try:
            seed = int(env) if env not in (None, "") else 0
        except ValueError:
            raise UsageError(f"GEOLAB_SEED is not an integer: {env!r}")
    try:
        return OptConfig(
            grid_resolution=args.grid_resolution,
            top_cells=args.top_cells,
            step_tol=args.step_tol,
            max_evals=args.max_evals,
            seed=seed,
            extra_starts=args.extra_starts,
        )
    except ValueError as exc:
        raise UsageError(str(exc))


def _space(spec: str):
    try:
        return parse_space_spec(spec)
    except SpaceSpecError as exc:
        raise UsageError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geolab", description="Isosceles Zbaganu constants of normed spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constant", help="compute one constant as JSON")
    c.add_argument("spec")
    c.add_argument("name", choices=sorted(CONSTANTS))
    c.add_argument("--t", type=float, default=None,
                   help="parameter t (epsilon for delta)")
    c.add_argument("--method", default=None)
    _add_cfg_flags(c)

    cv = sub.add_parser("curve", help="write a curve as CSV")
    cv.add_argument("spec")
    cv.add_argument("name", choices=("czi", "z", "rho", "delta"))
    cv.add_argument("--grid", type=int, default=51)
    cv.add_argument("--out", required=True)
    _add_cfg_flags(cv)

    v = sub.add_parser("verify", help="run the claim registry, write JSON")
    v.add_argument("--space", action="append", default=None,
                   help="space spec; repeatable; default is the built-in catalog")
    v.add_argument("--ids", default=None, help="comma-separated claim ids")
    v.add_argument("--out", required=True)
    v.add_argument("--timings", action="store_true", help="include runtime_ms")
    _add_cfg_flags(v)
    return parser


# -- constant ------------------------------------------------------------------

def _need_t(t, name):
    if t is None:
        raise UsageError(f"{name} needs --t")
    return t


def _with_method(default, allowed):
    def wrap(fn):
        def run(space, t, method, cfg):
            m = method or default
            if m not in allowed:
                raise UsageError(f"unknown method {m!r}; choose from {', '.join(allowed)}")
            return fn(space, t, m, cfg)
        return run
    return wrap


@_with_method("direct", ("direct", "identity"))
def _c_czi(space, t, m, cfg):
    return C.czi(space, _need_t(t, "czi"), m, cfg).to_dict()


@_with_method("direct", ("direct",))
def _c_z(space, t, m, cfg):
    return C.z_profile(space, _need_t(t, "z"), cfg).to_dict()


@_with_method("direct", ("direct", "profile_corrected", "profile_paper"))
def _c_zbaganu(space, t, m, cfg):
    return C.zbaganu(space, m, cfg).to_dict()


@_with_method("minform", ("minform", "isoform"))
def _c_james(space, t, m, cfg):
    return C.james(space, m, cfg).to_dict()


@_with_method("classic", ("classic", "modified", "iso"))
def _c_nj(space, t, m, cfg):
    return C.nj_constant(space, m, cfg).to_dict()


@_with_method("direct", ("direct",))
def _c_htilde(space, t, m, cfg):
    return C.h_tilde(space, cfg).to_dict()


@_with_method("direct", ("direct",))
def _c_rho(space, t, m, cfg):
    return C.modulus_smoothness(space, _need_t(t, "rho"), cfg).to_dict()


@_with_method("direct", ("direct",))
def _c_delta(space, t, m, cfg):
    return C.modulus_convexity(space, _need_t(t, "delta"), cfg).to_dict()


@_with_method("direct", ("direct",))
def _c_slope(space, t, m, cfg):
    z_form, czi_form = C.smoothness_slope(space, [_need_t(t, "slope")], cfg, both=True)[0]
    return {"value": z_form, "czi_form": czi_form}


@_with_method("direct", ("direct",))
def _c_nonsquare(space, t, m, cfg):
    d = C.nonsquare_diagnostic(space, cfg)
    return {"flag": d.flag, "t_witness": d.t_witness, "james_value": d.james_value,
            "consistent": d.consistent}


CONSTANTS = {
    "czi": _c_czi,
    "z": _c_z,
    "zbaganu": _c_zbaganu,
    "james": _c_james,
    "nj": _c_nj,
    "htilde": _c_htilde,
    "rho": _c_rho,
    "delta": _c_delta,
    "slope": _c_slope,
    "nonsquare": _c_nonsquare,
}


def cmd_constant(args) -> int:
    space = _space(args.spec)
    cfg = _cfg(args)
    try:
        result = CONSTANTS[args.name](space, args.t, args.method, cfg)
    except (ValueError, SpaceSpecError) as exc:
        raise UsageError(str(exc))
    out = {"space": format_space_spec(space), "constant": args.name}
    if args.t is not None:
        out["t"] = args.t
    out.update(result)
    sys.stdout.write(json.dumps(out, sort_keys=True) + "\n")
    return EXIT_OK


# -- curve ---------------------------------------------------------------------

def _fmt(x) -> str:
    return format(float(x), ".12g")


def curve_rows(space, name: str, grid: int, cfg: OptConfig) -> list:
    """Rows ``(method, t, value, lower, upper)`` for one curve."""
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    rows = []
    if name == "czi":
        ts = [0.5 * k / (grid - 1) for k in range(grid)]
        for method in ("direct", "identity"):
            for p in C.czi_curve(space, ts, method, cfg):
                rows.append((method, p.t, p.value, p.lower_bound, p.upper_bound))
    elif name == "z":
        ts = [k / (grid - 1) for k in range(grid)]
        for p in C.z_curve(space, ts, cfg):
            rows.append(("direct", p.t, p.value, p.lower_bound, p.upper_bound))
    elif name == "rho":
        ts = [k / (grid - 1) for k in range(grid)]
        for t in ts:
            rows.append(("direct", t, C.modulus_smoothness(space, t, cfg).value, 0.0, t))
    else:
        ts = [2.0 * k / (grid - 1) for k in range(grid)]
        for e in ts:
            rows.append(("direct", e, C.modulus_convexity(space, e, cfg).value, 0.0,
                         1.0 - math.sqrt(max(0.0, 1.0 - e * e / 4.0))))
    return rows


def render_curve(space, name: str, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    spec = format_space_spec(space)
    for method, t, value, lower, upper in rows:
        w.writerow((spec, name, method, _fmt(t), _fmt(value), _fmt(lower), _fmt(upper)))
    return buf.getvalue()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_curve(args) -> int:
    space = _space(args.spec)
    cfg = _cfg(args)
    text = render_curve(space, args.name, curve_rows(space, args.name, args.grid, cfg))
    _write(args.out, text)
    return EXIT_OK


# -- verify --------------------------------------------------------------------

def cmd_verify(args) -> int:
    spaces = [_space(s) for s in args.space] if args.space else list(DEFAULT_CATALOG)
    ids = None
    if args.ids:
        ids = [s.strip() for s in args.ids.split(",") if s.strip()]
    cfg = _cfg(args)
    try:
        reports = run_claims(spaces, ids, cfg)
    except UnknownClaimError as exc:
        raise UsageError(exc.args[0])
    text = json.dumps(report_json(reports, args.timings), indent=2, sort_keys=True) + "\n"
    _write(args.out, text)
    return EXIT_OK if all_asserted_pass(reports) else EXIT_CLAIM


COMMANDS = {"constant": cmd_constant, "curve": cmd_curve, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"geolab: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"geolab: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
