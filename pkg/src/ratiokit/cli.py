"""Command-line front end: ``eval``, ``sweep``, ``mc`` and ``verify``.

Exit codes: 0 success, 1 domain or validation error, 2 verification
failure, 3 numerical failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import formula, haar_mc, series_oracle, verify
from .errors import (CapacityError, DomainViolation, NumericalFailure, RatioKitError,
                     ShapeError)
from .params import validate, validate_extended

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_VERIFY = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

MODES = ("thm1", "cor12", "compact", "stable", "confluent", "series")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def complex_pair(text: str) -> complex:
    """``"re,im"`` or ``"re"``."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")


def _int0(text):
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _add_param_flags(p):
    g = p.add_argument_group("parameters (inline flags or --params)")
    g.add_argument("--params", metavar="FILE", help="JSON parameter record")
    g.add_argument("--p", type=int)
    g.add_argument("--q", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--pprime", type=int)
    g.add_argument("--qprime", type=int)
    g.add_argument("--xs", type=complex_pair, nargs="*", metavar="RE,IM")
    g.add_argument("--ys", type=complex_pair, nargs="*", metavar="RE,IM")


def _add_output_flags(p, default_format="json"):
    p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default=default_format)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ratiokit", description="Haar averages of characteristic-polynomial ratios")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    ev = sub.add_parser("eval", help="evaluate the exact formula")
    ev.add_argument("--mode", choices=MODES, default="thm1")
    ev.add_argument("--tol", type=float, default=formula.CLUSTER_TOL,
                    help="cluster tolerance (series mode: tail tolerance)")
    ev.add_argument("--order", type=int, help="series truncation order (series mode)")
    ev.add_argument("--precision", choices=("double", "extended", "auto"), default="double")
    _add_param_flags(ev)
    _add_output_flags(ev)

    sw = sub.add_parser("sweep", help="evaluate along a one-parameter grid")
    sw.add_argument("--mode", choices=("thm1", "cor12", "compact", "stable"), default="thm1")
    sw.add_argument("--vary", required=True,
                    help="psi<k>, phi<k>, xre<k>, xim<k>, yre<k>, yim<k> (1-based) or N")
    sw.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    sw.add_argument("--values", type=float, nargs="+")
    sw.add_argument("--tol", type=float, default=formula.CLUSTER_TOL)
    _add_param_flags(sw)
    _add_output_flags(sw, "csv")

    mc = sub.add_parser("mc", help="Monte Carlo estimate")
    mc.add_argument("--mode", choices=("thm1", "cor12"), default="thm1")
    mc.add_argument("--samples", type=int, default=100_000)
    mc.add_argument("--seed", type=_int0)
    mc.add_argument("--workers", type=int, default=1)
    _add_param_flags(mc)
    _add_output_flags(mc)

    vf = sub.add_parser("verify", help="run acceptance suites")
    vf.add_argument("--suite", default="all",
                    help="all, quick, a criterion number or name, or a comma list")
    vf.add_argument("--seed", type=_int0)
    vf.add_argument("--workers", type=int, default=1)
    vf.add_argument("--out", metavar="FILE")
    vf.add_argument("--format", choices=("json", "csv", "text"), default="json")
    return parser


# ---------------------------------------------------------------------------

def _raw_params(args) -> dict:
    inline = any(getattr(args, k) is not None for k in ("p", "q", "N", "xs", "ys", "pprime", "qprime"))
    if args.params and inline:
        raise UsageError("give parameters either inline or with --params, not both")
    if args.params:
        with open(args.params) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise UsageError("--params file must hold a JSON object")
        return raw
    raw = {}
    for k in ("p", "q", "N", "pprime", "qprime"):
        if getattr(args, k) is not None:
            raw[k] = getattr(args, k)
    raw["xs"] = [[z.real, z.imag] for z in (args.xs or [])]
    raw["ys"] = [[z.real, z.imag] for z in (args.ys or [])]
    for k in ("p", "q", "N"):
        if k not in raw:
            raise UsageError(f"missing --{k}")
    return raw


def _pairs(vals):
    return [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in vals]


def _evaluate(mode, raw, args):
    """Returns ``(result-like, params dict)``."""
    if mode in ("thm1", "confluent", "series"):
        P = validate(raw)
        if mode == "thm1":
            r = formula.eval_thm1(P, cluster_tol=args.tol,
                                  precision=getattr(args, "precision", "double"))
        elif mode == "confluent":
            r = formula.eval_confluent(P, tol=args.tol)
        else:
            pol = None if args.order is None else series_oracle.TruncationPolicy.for_params(P, args.order)
            s = series_oracle.torus_average(P, pol)
            r = formula.EvalResult(s.value, "series", 1.0,
                                   diagnostics={"order": s.order, "tail_bound": s.bound})
        return r, P.to_dict()
    if mode == "cor12":
        E = validate_extended(raw)
        return formula.eval_cor12(E, cluster_tol=args.tol), E.to_dict()
    p, q, N = int(raw["p"]), int(raw["q"]), int(raw["N"])
    if mode == "compact":
        xs = _pairs(raw.get("xs", []))
        d = {"p": p, "q": q, "N": N, "xs": [[z.real, z.imag] for z in xs]}
        return formula.eval_compact(p, q, N, xs, cluster_tol=args.tol), d
    ys = _pairs(raw.get("ys", []))
    d = {"p": p, "q": q, "N": N, "ys": [[z.real, z.imag] for z in ys]}
    return formula.eval_stable(p, q, N, ys), d


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_eval(args) -> int:
    raw = _raw_params(args)
    r, pd = _evaluate(args.mode, raw, args)
    v = complex(r.value)
    if args.format == "csv":
        text = "mode,value_re,value_im,method,condition\n" \
               f"{args.mode},{v.real!r},{v.imag!r},{r.method},{r.condition!r}"
    else:
        text = json.dumps(_jsonable({
            "mode": args.mode, "value": v, "method": r.method, "condition": r.condition,
            "precision": r.precision, "params": pd, "diagnostics": r.diagnostics,
        }), indent=2)
    _emit(text, args.out)
    return EXIT_OK


def _apply_vary(raw, name, value):
    raw = json.loads(json.dumps(raw))
    if name == "N":
        raw["N"] = int(round(value))
        return raw
    for prefix, key in (("psi", "xs"), ("phi", "ys"), ("xre", "xs"), ("xim", "xs"),
                        ("yre", "ys"), ("yim", "ys")):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            k = int(name[len(prefix):]) - 1
            vals = raw.get(key, [])
            if not 0 <= k < len(vals):
                raise UsageError(f"--vary {name}: index out of range")
            re_, im_ = vals[k]
            if prefix == "psi":
                z = cmath.exp(1j * value)
                re_, im_ = z.real, z.imag
            elif prefix == "phi":
                re_, im_ = math.exp(value), 0.0
            elif prefix.endswith("re"):
                re_ = value
            else:
                im_ = value
            vals[k] = [re_, im_]
            return raw
    raise UsageError(f"unknown sweep variable {name!r}")


def cmd_sweep(args) -> int:
    raw = _raw_params(args)
    if (args.grid is None) == (args.values is None):
        raise UsageError("give exactly one of --grid or --values")
    if args.grid is not None:
        start, stop, count = args.grid
        if count < 1 or count != int(count):
            raise UsageError("--grid COUNT must be a positive integer")
        points = list(np.linspace(start, stop, int(count)))
    else:
        points = list(args.values)
    rows = []
    for x in points:
        r, _ = _evaluate(args.mode, _apply_vary(raw, args.vary, x), args)
        v = complex(r.value)
        rows.append((float(x), v.real, v.imag, float(r.condition)))
    if args.format == "csv":
        text = "point,value_re,value_im,condition\n" + "\n".join(
            f"{a!r},{b!r},{c!r},{d!r}" for a, b, c, d in rows)
    else:
        text = json.dumps({"vary": args.vary, "mode": args.mode, "rows": [
            {"point": a, "value": [b, c], "condition": d} for a, b, c, d in rows]}, indent=2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_mc(args) -> int:
    raw = _raw_params(args)
    params = validate_extended(raw) if args.mode == "cor12" else validate(raw)
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    est = haar_mc.mc_estimate(params, args.samples, haar_mc.resolve_seed(args.seed), args.workers)
    if args.format == "csv":
        text = "mean_re,mean_im,stderr,samples,seed\n" \
               f"{est.mean.real!r},{est.mean.imag!r},{est.stderr!r},{est.samples},{est.seed}"
    else:
        d = est.to_dict()
        d["params"] = params.to_dict()
        text = json.dumps(d, indent=2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = haar_mc.resolve_seed(args.seed)
    try:
        names = verify.suite_members(args.suite)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    results = verify.run_suite(names, seed, args.workers)
    if args.format != "text":
        for r in results:
            sys.stderr.write(r.line() + "\n")
    _emit(verify.render(results, args.format, seed), args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {"eval": cmd_eval, "sweep": cmd_sweep, "mc": cmd_mc, "verify": cmd_verify}


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"ratiokit: usage error: {exc}\n")
        return EXIT_USAGE
    except (DomainViolation, ShapeError, CapacityError) as exc:
        sys.stderr.write(f"ratiokit: domain error: {exc}\n")
        return EXIT_DOMAIN
    except (NumericalFailure, ArithmeticError, RatioKitError) as exc:
        sys.stderr.write(f"ratiokit: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except (ValueError, TypeError, KeyError) as exc:
        sys.stderr.write(f"ratiokit: invalid input: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"ratiokit: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
