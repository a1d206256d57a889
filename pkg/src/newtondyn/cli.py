"""Command-line front end.

Exit codes: 0 on success, 2 when a report carries a failed verification,
1 on errors (bad input, solver failure, I/O).
"""
from __future__ import annotations

import argparse
import json
import sys

import sympy as sp

from . import jsonio

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


# --------------------------------------------------------------------------
# argument parsing helpers


def _number(v):
    """JSON scalar, [re, im] pair or sympy-parsable string; ints stay exact."""
    if isinstance(v, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(v, int):
        return sp.Integer(v)
    if isinstance(v, float):
        return complex(v)
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {v!r}")
        re, im = (_number(x) for x in v)
        if all(isinstance(x, sp.Basic) for x in (re, im)):
            return re + sp.I * im
        return complex(re) + 1j * complex(im)
    if isinstance(v, str):
        e = sp.sympify(v, locals={"i": sp.I, "j": sp.I})
        if not e.is_number:
            raise ValueError(f"not a number: {v!r}")
        return e
    raise ValueError(f"not a number: {v!r}")


def parse_numbers(text):
    """'[[0,0],[1,0],"1/2"]' or '0, 1, 1/2+I' -> list of numbers."""
    text = text.strip()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [p.strip() for p in text.strip("[]").split(",") if p.strip()]
    if not isinstance(data, list):
        data = [data]
    return [_number(v) for v in data]


def parse_window(text):
    vals = [float(x) for x in text.split(",")]
    if len(vals) != 4 or vals[0] >= vals[2] or vals[1] >= vals[3]:
        raise argparse.ArgumentTypeError("window is x0,y0,x1,y1 with x0 < x1 and y0 < y1")
    return tuple(vals)


def parse_res(text):
    parts = text.lower().split("x")
    if len(parts) == 1:
        parts = parts * 2
    w, h = (int(p) for p in parts)
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("resolution must be positive")
    return (w, h)


def parse_t_values(text):
    ts = [float(x) for x in text.split(",") if x.strip()]
    if not ts or any(t <= 0 for t in ts):
        raise argparse.ArgumentTypeError("t values must be positive")
    return tuple(ts)


def parse_marks(text):
    """'1.3:D, 0:A' -> [(c, letter)]."""
    out = []
    for part in [p for p in text.split(",") if p.strip()]:
        c, letter = part.rsplit(":", 1)
        out.append((complex(c.strip().replace("i", "j")), letter.strip()))
    return out


def _newton(args):
    from .newton import newton_from_poly, newton_from_roots

    if getattr(args, "poly", None):
        return newton_from_poly(parse_numbers(args.poly))
    if getattr(args, "roots", None):
        return newton_from_roots(parse_numbers(args.roots))
    raise ValueError("give --roots or --poly")


def _emit(obj, args, schema=None):
    if schema:
        jsonio.validate(obj, schema)
    text = jsonio.dumps(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args):
    from .basins import classify_hyperbolic_type

    N = _newton(args)
    rep = classify_hyperbolic_type(N, args.window, args.res[0], args.iter_cap, args.eps)
    _emit(rep.to_dict(), args, "hyperbolic_type_report")
    return EXIT_FAILED if rep.type == "unresolved" else EXIT_OK


def cmd_epstein(args):
    from .epstein import find_cycles, gamma_delta

    N = _newton(args)
    f = N.map
    fixed = find_cycles(f.to_float() if f.exact else f, 1)
    fsi = gamma_delta(f)
    out = {
        "fixed_points": [c.to_dict() for c in fixed],
        "multiplicity_sum": sum(c.multiplicity for c in fixed),
        "index_sum": jsonio.cnum(sum(complex(c.index) for c in fixed)),
        "multiplier_at_infinity": jsonio.cnum(complex(N.multiplier_at_infinity())),
        "fsi": fsi.to_dict(),
    }
    for c in out["fixed_points"]:
        jsonio.validate(c, "cycle_report")
    jsonio.validate(out["fsi"], "fsi_report")
    _emit(out, args)
    return EXIT_FAILED if fsi.satisfied is False else EXIT_OK


def cmd_cycles(args):
    from .epstein import find_cycles

    N = _newton(args)
    f = N.map.to_float() if N.map.exact else N.map
    cyc = [c for c in find_cycles(f, args.period, region=args.window) if c.period == args.period]
    out = [c.to_dict() for c in cyc]
    for c in out:
        jsonio.validate(c, "cycle_report")
    _emit(out, args)
    return EXIT_OK


def _save(img, args, default_name):
    from .render import save_image

    fmt = args.format if args.format in ("ppm", "png") else None
    path = args.out or default_name + "." + (fmt or "ppm")
    save_image(img, path, fmt)
    print(path)


def cmd_render_julia(args):
    from .render import RenderJob, render_julia

    N = _newton(args)
    job = RenderJob("julia", args.window, args.res, args.iter_cap, args.eps, args.out)
    img, _ = render_julia(job, N)
    _save(img, args, "julia")
    return EXIT_OK


def cmd_render_per2(args):
    from .render import RenderJob, render_param_per2

    job = RenderJob("param-per2", args.window, args.res, args.iter_cap, args.eps, args.out)
    img, _ = render_param_per2(job, parse_marks(args.marks) if args.marks else ())
    _save(img, args, "per2")
    return EXIT_OK


def cmd_berkovich(args):
    from .berkovich import analyze_family
    from .puiseux import parse_family, series

    fam = parse_family(args.family)
    if "r" not in fam or "s" not in fam:
        raise ValueError("berkovich needs a marked family 'r = ...; s = ...'")
    ana = analyze_family(series(fam["r"]), series(fam["s"]), with_fsi=args.fsi, exact=args.exact)
    _emit(ana.to_dict(), args, "berkovich_analysis")
    return EXIT_OK if ana.verified else EXIT_FAILED


def cmd_degenerate(args):
    from .degeneration import DEFAULT_T, degeneration_report

    rep = degeneration_report(args.family, args.t_values or DEFAULT_T, args.period or 2)
    _emit(rep, args, "degeneration_report")
    return EXIT_OK if rep["passed"] else EXIT_FAILED


def cmd_blaschke(args):
    from .blaschke import escape_diagnostics

    table = escape_diagnostics(args.k, n=args.a_seq)
    if args.format == "text":
        text = table.to_text()
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    else:
        _emit(table.to_dict(), args, "blaschke_table")
    return EXIT_OK if table.passed else EXIT_FAILED


# --------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="newtondyn", description="Dynamics and degenerations of Newton maps.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp_, roots=True, fmt=("json",)):
        if roots:
            g = sp_.add_mutually_exclusive_group(required=True)
            g.add_argument("--roots", help='roots as JSON, e.g. "[[0,0],[1,0],\\"1/2\\"]"')
            g.add_argument("--poly", help="ascending polynomial coefficients, same syntax as --roots")
        sp_.add_argument("--window", type=parse_window, default=None, help="x0,y0,x1,y1")
        sp_.add_argument("--res", type=parse_res, default=(512, 512), help="WxH")
        sp_.add_argument("--iter-cap", type=int, default=2000)
        sp_.add_argument("--eps", type=float, default=1e-9)
        sp_.add_argument("--out", default=None)
        sp_.add_argument("--format", choices=fmt, default=fmt[0])

    s = sub.add_parser("classify", help="hyperbolic type of a quartic Newton map")
    common(s)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("epstein", help="fixed-point invariants and the refined FSI")
    common(s)
    s.set_defaults(func=cmd_epstein)

    s = sub.add_parser("cycles", help="cycles of a given exact period")
    common(s)
    s.add_argument("--period", type=int, required=True)
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("render-julia", help="basin picture of a Newton map")
    common(s, fmt=("ppm", "png"))
    s.set_defaults(func=cmd_render_julia, iter_cap=200)

    s = sub.add_parser("render-per2", help="parameter plane of the slice with the cycle 0 <-> 1")
    common(s, roots=False, fmt=("ppm", "png"))
    s.add_argument("--marks", default=None, help='letters to overlay, e.g. "1.3:D,0:A"')
    s.set_defaults(func=cmd_render_per2, iter_cap=200)

    s = sub.add_parser("berkovich", help="series analysis of a marked degenerating family")
    s.add_argument("--family", required=True, help='e.g. "r = t; s = 1/2"')
    s.add_argument("--fsi", action="store_true", help="also run the FSI on the reduction")
    s.add_argument("--exact", action="store_true", help="exact reduction coefficients")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("json",), default="json")
    s.set_defaults(func=cmd_berkovich)

    s = sub.add_parser("degenerate", help="numeric sampling of a degenerating family")
    s.add_argument("--family", required=True, help="'r = ...; s = ...', 'roots = ...', 'odd-quintic' or 'per2:c0'")
    s.add_argument("--t-values", type=parse_t_values, default=None)
    s.add_argument("--period", type=int, default=2, help="track cycles of periods 1..P")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("json",), default="json")
    s.set_defaults(func=cmd_degenerate)

    s = sub.add_parser("blaschke", help="escape diagnostics of the Blaschke model")
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--a-seq", type=int, default=6, help="use a = 1 - 10^-j for j = 1..N")
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("json", "text"), default="json")
    s.set_defaults(func=cmd_blaschke)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # reported, not raised: the exit code carries the outcome
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
