"""Command line front end.  Every command prints one JSON document."""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import errors
from .exact_arith import INF, QuadIrr, format_number, parse_number

SCHEMA = 1
VERSION = "0.1.0"

_MESSAGES = {
    errors.ParseError: "parse error",
    errors.InvalidMatrix: "invalid matrix",
    errors.ScalarInput: "scalar matrix",
    errors.NotHyperbolic: "not hyperbolic",
    errors.NotNormalized: "not normalized",
    errors.NotPrimitive: "not primitive",
    errors.NotCoprime: "not coprime",
    errors.PreconditionViolated: "precondition violated",
    errors.DegenerateLeadingCoefficient: "degenerate form",
    errors.ZeroArgument: "zero argument",
    errors.NonPositiveImaginaryPart: "point not in the upper half plane",
    errors.DomainTooLow: "point too close to the real axis",
    errors.TruncationTooSmall: "truncation too small",
    errors.PoleProximity: "too close to a pole",
}


def _json(x):
    from .modular_group import Mat2
    from .qforms import BQF

    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, (Fraction, QuadIrr)) or x is INF:
        return format_number(x)
    if isinstance(x, BQF):
        return x.as_list()
    if isinstance(x, Mat2):
        return list(x.entries())
    if isinstance(x, dict):
        return {str(k): _json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json(v) for v in x]
    if hasattr(x, "value") and hasattr(x, "name"):
        return x.value
    return str(x)


def _result(command, inputs, value, witnesses=None, meta=None):
    out = {"schema": SCHEMA, "command": command, "inputs": inputs, "value": value,
           "meta": {"version": VERSION, **(meta or {})}}
    if witnesses is not None:
        out["witnesses"] = witnesses
    return _json(out)


def _matrix(text):
    from .modular_group import parse_matrix

    return parse_matrix(text)


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise errors.ParseError(f"cannot parse complex number {text!r}") from exc


# -- commands ---------------------------------------------------------------

def cmd_classical(args):
    from .contfrac import hyperbolic_to_word
    from .modular_group import normalize_hyperbolic
    from .symbols_classical import phi_classical, psi_cf, psi_classical

    m = _matrix(args.matrix)
    inputs = {"matrix": m, "method": args.method}
    if args.method == "formula":
        return _result("classical", inputs, {"phi": phi_classical(m), "psi": psi_classical(m)})
    n, tag = normalize_hyperbolic(m)
    _, word, k = hyperbolic_to_word(n)
    psi = k * psi_cf(word)
    if tag.endswith("^-1"):
        psi = -psi
    return _result("classical", inputs, {"phi": None, "psi": psi},
                   witnesses={"normalized": n, "normalization": tag, "word": word, "exponent": k})


def cmd_cf(args):
    from .contfrac import cf_of_quadirr, cf_of_rational

    x = parse_number(args.value)
    if x is INF:
        raise errors.ParseError("oo has no continued fraction")
    cf = cf_of_quadirr(x) if isinstance(x, QuadIrr) else cf_of_rational(x)
    return _result("cf", {"value": x},
                   {"preperiod": cf.preperiod, "period": cf.period, "text": str(cf)})


def cmd_conj(args):
    from .contfrac import conjugate_expansion, parse_cf

    x = parse_cf(args.cf)
    y = conjugate_expansion(x)
    return _result("conj", {"cf": str(x)},
                   {"preperiod": y.preperiod, "period": y.period, "text": str(y),
                    "conjugate": y.value()})


def cmd_forms(args):
    from .qforms import enumerate_straddling, filter_straddle_point, parse_form, reduce_cycle

    q = parse_form(args.cls)
    x = parse_number(args.straddle)
    if isinstance(x, QuadIrr) or x is INF:
        raise errors.ParseError("--straddle needs a rational point")
    cls = reduce_cycle(q)
    forms = enumerate_straddling(cls, x, args.method, args.threads)
    inputs = {"class": q, "straddle": x, "method": args.method}
    wit = {"cycle": cls.cycle}
    if args.point:
        p = parse_number(args.point)
        inputs["point"] = p
        wit["straddling_point"] = filter_straddle_point(forms, p)
    return _result("forms", inputs, forms, witnesses=wit)


def cmd_hyp_phi(args):
    from .symbols_hyperbolic import cusp_of, phi_hyp_witnesses

    g, s = _matrix(args.gamma), _matrix(args.sigma)
    forms = phi_hyp_witnesses(g, s, args.enum)
    return _result("hyp-phi", {"gamma": g, "sigma": s}, -len(forms),
                   witnesses={"cusp": cusp_of(s), "straddling": forms})


def cmd_hyp_psi(args):
    from .symbols_hyperbolic import (
        geodesics_coincide,
        intersection_count_oracle,
        psi_hyp_first,
        psi_hyp_second,
        words_of,
    )

    g, s = _matrix(args.gamma), _matrix(args.sigma)
    methods = ["first", "second", "oracle"] if args.method == "all" else [args.method]
    value, wit = {}, {}
    for meth in methods:
        if meth == "first":
            rep = psi_hyp_first(g, s, args.enum)
            value["first"] = rep.psi
            value["phi"] = rep.phi
            wit["first"] = rep.witnesses
        elif meth == "second":
            gw, sw = words_of(g, s)
            psi, corr = psi_hyp_second(gw, sw)
            value["second"] = psi
            wit["second"] = {"gamma_word": gw, "sigma_word": sw, "correction": corr}
        else:
            from .modular_group import normalize_hyperbolic

            sn, _ = normalize_hyperbolic(s)
            if geodesics_coincide(g, sn):
                value["oracle"] = None
                wit["oracle"] = {"declined": "coinciding geodesics"}
                continue
            res = intersection_count_oracle(g, sn, args.depth)
            value["oracle"] = -res.count
            wit["oracle"] = {"count": res.count, "stable": res.stable,
                             "counts_by_depth": res.counts_by_depth, "crossings": res.crossings}
    exact = [value[k] for k in ("first", "second") if k in value]
    if exact and all(v == exact[0] for v in exact):
        value["psi"] = exact[0]
    return _result("hyp-psi", {"gamma": g, "sigma": s, "method": args.method, "depth": args.depth},
                   value, witnesses=wit)


def cmd_analytic(args):
    from . import analytic

    g = _matrix(args.gamma)
    meta = {"nodes": args.nodes}
    if args.action == "val":
        tab = analytic.cycle_integral_table(g, args.max_m, args.nodes)
        meta.update({"dps": tab.dps, "method": tab.method, "max_height": tab.max_height})
        if args.csv:
            lines = ["m,value,error_estimate"]
            lines += [f"{m},{v!r},{e!r}" for m, (v, e) in enumerate(zip(tab.values, tab.error_estimate))]
            return "\n".join(lines)
        return _result("analytic val", {"gamma": g, "max_m": args.max_m}, tab.values,
                       witnesses={"error_estimate": tab.error_estimate}, meta=meta)
    s = _matrix(args.sigma)
    meta["truncation"] = args.truncation
    if args.action == "verify-cocycle":
        z = _complex(args.z)
        lhs, rhs, res = analytic.verify_cocycle(g, s, z, args.truncation, args.nodes)
        return _result("analytic verify-cocycle", {"gamma": g, "sigma": s, "z": z},
                       {"lhs": lhs, "rhs": rhs, "residual": res}, meta=meta)
    z0 = _complex(args.z)
    tr = analytic.verify_integral_psi(g, s, args.n_max, args.truncation, z0, args.nodes)
    return _result("analytic verify-integral", {"gamma": g, "sigma": s, "z0": z0, "n_max": args.n_max},
                   {"partials": tr.partials, "exact": tr.exact}, meta=meta)


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all()
    ok = all(r["ok"] for r in results)
    return _result("selftest", {}, {"ok": ok, "checks": results}), (0 if ok else 1)


# -- plumbing -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=argparse.SUPPRESS,
                        help="human-readable table instead of JSON")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker threads (default $RSYM_THREADS or 1)")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="add wall-clock time to meta")
    p = argparse.ArgumentParser(prog="rsym", description="Dedekind and Rademacher symbols for SL2(Z)",
                                parents=[common])
    p.set_defaults(pretty=False, threads=None, timing=False)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add(name):
        return _add(name, parents=[common])

    c = add("classical")
    c.add_argument("--matrix", required=True)
    c.add_argument("--method", choices=["formula", "cf"], default="formula")
    c.set_defaults(fn=cmd_classical)

    c = add("cf")
    c.add_argument("--value", required=True, help='"p/q" or "(p+q*sqrt(d))/r"')
    c.set_defaults(fn=cmd_cf)

    c = add("conj")
    c.add_argument("--cf", required=True, help='"pre;period", e.g. "2,1;1,4,3,2"')
    c.set_defaults(fn=cmd_conj)

    c = add("forms")
    c.add_argument("--class", dest="cls", required=True)
    c.add_argument("--straddle", required=True)
    c.add_argument("--point", help="also filter the list at this point")
    c.add_argument("--method", choices=["auto", "divisor", "farey"], default="auto")
    c.set_defaults(fn=cmd_forms)

    for name, fn in (("hyp-phi", cmd_hyp_phi), ("hyp-psi", cmd_hyp_psi)):
        c = add(name)
        c.add_argument("--gamma", required=True)
        c.add_argument("--sigma", required=True)
        c.add_argument("--enum", choices=["auto", "divisor", "farey"], default="auto")
        if name == "hyp-psi":
            c.add_argument("--method", choices=["first", "second", "oracle", "all"], default="first")
            c.add_argument("--depth", type=int, default=8)
        c.set_defaults(fn=fn)

    c = add("analytic")
    c.add_argument("action", choices=["val", "verify-cocycle", "verify-integral"])
    c.add_argument("--gamma", required=True)
    c.add_argument("--sigma")
    c.add_argument("--max-m", type=int, default=10)
    c.add_argument("--nodes", type=int, default=256)
    c.add_argument("--truncation", type=int, default=200)
    c.add_argument("--z", default="1j")
    c.add_argument("--n-max", type=int, default=4)
    c.add_argument("--csv", action="store_true")
    c.set_defaults(fn=cmd_analytic)

    c = add("selftest")
    c.set_defaults(fn=cmd_selftest)
    return p


def _flatten(prefix, x, rows):
    if isinstance(x, dict):
        for k in sorted(x):
            _flatten(f"{prefix}.{k}" if prefix else k, x[k], rows)
    elif isinstance(x, list) and x and all(isinstance(v, dict) for v in x):
        for i, v in enumerate(x):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(x)))


def render_pretty(doc) -> str:
    rows = []
    _flatten("", doc, rows)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analytic" and args.action != "val" and not args.sigma:
            parser.error(f"analytic {args.action} needs --sigma")
    except SystemExit as exc:  # argparse reports usage errors with exit code 2
        return exc.code
    if args.threads is None:
        from .qforms import default_threads

        args.threads = default_threads()
    t0 = time.perf_counter()
    try:
        out = args.fn(args)
    except errors.RsymError as exc:
        label = next((v for k, v in _MESSAGES.items() if isinstance(exc, k)), "bad input")
        print(f"rsym: {label}: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(out, tuple):
        out, code = out
    if isinstance(out, str):
        print(out)
        return code
    if args.timing:
        out["meta"]["seconds"] = time.perf_counter() - t0
    if args.pretty:
        print(render_pretty(out))
    else:
        print(json.dumps(out, sort_keys=True))
    return code


def main():
    sys.exit(run())
