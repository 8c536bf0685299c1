"""Command-line front end.

Exit codes: 0 when the command succeeded and every check passed, 1 when a
mathematical check failed, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from math import comb
from typing import List, Optional, Sequence

from .errors import FanoVerifyError
from .example import (
    LineConfiguration,
    build_example,
    comb_hypotheses,
    example_configuration,
    hilbert_ideal,
    hilbert_structure,
    linear_system_through,
    verify_example,
)
from .experiments import TrialConfig, section_lift_check, very_free_search
from .field import FieldSpec
from .forms import ProjectivePoint
from .geometry import (
    Hypersurface,
    RationalCurve,
    contains_curve,
    is_typical,
    normal_bundle_splitting,
    pullback_tangent_splitting,
)


class InputError(Exception):
    """Bad input file or argument; maps to exit code 2."""


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def parse_field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def load_surface(path: str) -> Hypersurface:
    obj = load_json(path)
    if isinstance(obj, dict) and "hypersurface" in obj:
        obj = obj["hypersurface"]
    try:
        return Hypersurface.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a hypersurface ({exc})") from exc


def load_curve(path: str, field: FieldSpec) -> RationalCurve:
    obj = load_json(path)
    if isinstance(obj, dict) and "curve" in obj:
        if "hypersurface" in obj:
            field = FieldSpec.from_json(obj["hypersurface"])
        obj = obj["curve"]
    try:
        if isinstance(obj, dict) and "field" in obj:
            field = FieldSpec.from_json(obj)
        return RationalCurve.from_json(field, obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a curve ({exc})") from exc


def parse_point(text: str, field: FieldSpec) -> ProjectivePoint:
    try:
        return ProjectivePoint(field, [field.parse_element(x.strip()) for x in text.split(",")])
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad point {text!r}: {exc}") from exc


def _paint(text: str, ok: bool) -> str:
    if os.environ.get("NO_COLOR") is not None or not sys.stdout.isatty():
        return text
    return ("\033[32m%s\033[0m" if ok else "\033[31m%s\033[0m") % text


def _table(rows: Sequence[Sequence[object]]) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, text, ok)


def cmd_example_verify(args):
    report = verify_example(build_example(args.n, args.field))
    rows = [("claim", "result", "locus")]
    for c in report.claims:
        rows.append((c.claim_id, _paint("PASS" if c.passed else "FAIL", c.passed), c.locus))
    text = _table(rows)
    if not report.passed:
        text += "\nfailed: " + ", ".join(c.claim_id for c in report.failures())
    return report.to_json(), text, report.passed


def cmd_splitting(args):
    X = load_surface(args.surface)
    f = load_curve(args.curve, X.field)
    _require_on(X, f)
    if args.bundle == "tangent":
        split = pullback_tangent_splitting(X, f)
    else:
        split = normal_bundle_splitting(X, f)
    return split.to_json(), str(split), True


def cmd_typical(args):
    X = load_surface(args.surface)
    f = load_curve(args.curve, X.field)
    _require_on(X, f)
    rep = is_typical(X, f)
    text = _table([("splitting", list(rep.splitting.degrees)), ("expected", list(rep.expected.degrees)),
                   ("h1", rep.h1), ("h1 criterion", rep.h1_criterion),
                   ("typical", _paint(str(rep.typical), rep.typical))])
    return rep.to_json(), text, rep.typical


def cmd_very_free(args):
    X = load_surface(args.surface)
    f = load_curve(args.curve, X.field)
    _require_on(X, f)
    split = pullback_tangent_splitting(X, f)
    ok = all(a >= 1 for a in split.degrees)
    payload = {"splitting": list(split.degrees), "very_free": ok}
    return payload, _table([("splitting", str(split)), ("very free", _paint(str(ok), ok))]), ok


def cmd_hilbert(args):
    if args.config:
        try:
            config = LineConfiguration.from_json(load_json(args.config))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{args.config}: not a line configuration ({exc})") from exc
    elif args.n is not None:
        config = example_configuration(args.n, args.field)
    else:
        raise InputError("hilbert needs --config or --n")
    config.validate()
    d = args.degree
    structure = hilbert_structure(config, d)
    ideal = hilbert_ideal(config, d)
    total = comb(config.n + d, d)
    agree = structure + ideal == total
    payload = {"degree": d, "h0_structure": structure, "h0_ideal": ideal,
               "forms": total, "routes_agree": agree}
    text = _table([("h0(O_C(d))", structure), ("h0(I_C(d))", ideal), ("forms of degree d", total),
                   ("routes agree", _paint(str(agree), agree))])
    return payload, text, agree


def cmd_linear_system(args):
    curves = [load_curve(p, args.field) for p in args.curve]
    fld = curves[0].field
    if any(c.field != fld or c.n != curves[0].n for c in curves):
        raise InputError("curves must share a field and an ambient space")
    basis = linear_system_through(curves, args.degree)
    payload = {"dimension": len(basis), "basis": [g.to_json() for g in basis]}
    return payload, "dimension %d" % len(basis), True


def cmd_comb_check(args):
    X = load_surface(args.surface)
    handle = load_curve(args.handle, X.field)
    teeth = [load_curve(p, X.field) for p in args.tooth]
    nodes = [parse_point(t, X.field) for t in args.node]
    for C in [handle] + teeth:
        _require_on(X, C)
    rep = comb_hypotheses(X, handle, teeth, nodes)
    rows = [(k, _paint("PASS" if v else "FAIL", v)) for k, v in sorted(rep.conditions.items())]
    return rep.to_json(), _table(rows), rep.passed


def cmd_search(args):
    cfg = TrialConfig(args.n, args.degree if args.degree is not None else args.n, args.e,
                      args.field, args.trials, args.seed, args.height)
    stats = very_free_search(cfg, workers=args.workers, stop_after=args.stop_after)
    payload = stats.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(payload) + "\n")
    rows = [(k, v) for k, v in stats.counts.items()]
    rows.append(("rejected curves", stats.rejected_curves))
    rows += [("splitting {%s}" % k, v) for k, v in sorted(stats.splittings.items())]
    return payload, _table(rows), True


def cmd_section_check(args):
    Y = load_surface(args.surface)
    f = load_curve(args.curve, Y.field)
    try:
        section_vars = [int(x) for x in args.section_vars.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --section-vars {args.section_vars!r}") from exc
    rep = section_lift_check(Y, section_vars, f)
    text = _table([("section splitting", str(rep.section_splitting)), ("splitting", str(rep.splitting)),
                   ("very free", _paint(str(rep.very_free), rep.very_free))])
    return rep.to_json(), text, rep.very_free


def _require_on(X: Hypersurface, f: RationalCurve) -> None:
    if f.n != X.n:
        raise InputError("curve and hypersurface live in different spaces")
    if not contains_curve(X, f):
        raise InputError("curve does not lie on the hypersurface")


COMMANDS = {
    "example-verify": cmd_example_verify,
    "splitting": cmd_splitting,
    "typical": cmd_typical,
    "very-free": cmd_very_free,
    "hilbert": cmd_hilbert,
    "linear-system": cmd_linear_system,
    "comb-check": cmd_comb_check,
    "search": cmd_search,
    "section-check": cmd_section_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=parse_field, default=FieldSpec.rationals(),
                        help="Q or F<p> (default Q)")
    common.add_argument("--json", action="store_true", help="print JSON instead of a table")

    parser = argparse.ArgumentParser(prog="fanoverify", description="Exact checks for rational curves on hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example-verify", parents=[common], help="verify the degree-n example")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("splitting", parents=[common], help="splitting type of a bundle along a curve")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--bundle", choices=("tangent", "normal"), default="tangent")

    for name in ("typical", "very-free"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--surface", required=True)
        p.add_argument("--curve", required=True)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert function of a line configuration")
    p.add_argument("--config")
    p.add_argument("--n", type=int)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("linear-system", parents=[common], help="forms vanishing on curves")
    p.add_argument("--curve", action="append", required=True)
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("comb-check", parents=[common], help="hypotheses for smoothing a comb")
    p.add_argument("--surface", required=True)
    p.add_argument("--handle", required=True)
    p.add_argument("--tooth", action="append", required=True)
    p.add_argument("--node", action="append", required=True, help="comma separated coordinates")

    p = sub.add_parser("search", parents=[common], help="random search for very free curves")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, help="hypersurface degree (default n)")
    p.add_argument("--e", type=int, required=True, help="curve degree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--height", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--stop-after", type=int)
    p.add_argument("--out", help="also write the stats JSON to this file")

    p = sub.add_parser("section-check", parents=[common], help="very free curve of a linear section")
    p.add_argument("--surface", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--section-vars", required=True, help="comma separated coordinate indices")
    return parser


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        payload, text, ok = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (FanoVerifyError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 2
    print(dumps(payload) if args.json else text, file=out)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
