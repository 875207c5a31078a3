"""Regression checks behind ``rsym selftest``.

Each check returns ``(ok, detail)``; ``detail`` is JSON-friendly.
"""
from __future__ import annotations

import math
import time

from .contfrac import CFExpansion, cf_of_quadirr, conjugate_expansion, parse_cf
from .exact_arith import quad
from .modular_group import Mat2, S, discriminant
from .qforms import BQF, enumerate_straddling, reduce_cycle
from .symbols_hyperbolic import phi_hyp, psi_hyp_first, psi_hyp_second

G1 = Mat2(2, 1, 1, 1)
G2 = Mat2(3, 2, 1, 1)
G3 = Mat2(3, 1, 2, 1)


def _forms(*triples):
    return sorted(BQF(*t) for t in triples)


def check_golden_pair():
    t0 = time.perf_counter()
    rep = psi_hyp_first(G1, G1)
    second, _ = psi_hyp_second((1, 1), (1, 1))
    elapsed = time.perf_counter() - t0
    want = _forms((1, 1, -1), (1, 3, 1), (-1, -1, 1), (-1, -3, -1))
    ok = (rep.phi == -4 and rep.psi == -4 and second == -4
          and rep.witnesses["straddling"] == want and elapsed < 1.0)
    return ok, {"phi": rep.phi, "psi": rep.psi, "psi_second": second,
                "witnesses": [str(f) for f in rep.witnesses["straddling"]],
                "seconds": round(elapsed, 4)}


def check_two_classes():
    first = _forms((-3, -6, -2), (-2, -6, -3), (-2, -2, 1), (1, 0, -3), (1, 2, -2), (1, 4, 1))
    second = sorted(-f for f in first)
    r1 = psi_hyp_first(G2, G1)
    r2 = psi_hyp_first(G3, G1)
    ok = (r1.phi == r2.phi == -6 and r1.psi == r2.psi == -4
          and r1.witnesses["straddling"] == first
          and r2.witnesses["straddling"] == second
          and sorted(r1.witnesses["straddling_both"] + r2.witnesses["straddling_both"])
          == _forms((1, 0, -3), (-1, 0, 3))
          and reduce_cycle(BQF(1, -2, -2)).cycle != reduce_cycle(BQF(2, -2, -1)).cycle)
    return ok, {"phi": [r1.phi, r2.phi], "psi": [r1.psi, r2.psi],
                "straddling_both": [[str(f) for f in r.witnesses["straddling_both"]] for r in (r1, r2)]}


def check_word_formula():
    psi, corr = psi_hyp_second((2, 1), (1, 1))
    return (psi == -4 and corr == 2), {"psi": psi, "correction": corr}


def check_expansions():
    a = cf_of_quadirr(quad(3, 1, 5, 2))
    b = conjugate_expansion(parse_cf("2,1;1,4,3,2"))
    c = cf_of_quadirr(quad(36, 2, 39, 19))
    ok = (a == CFExpansion((2, 1), (1, 1))
          and b == CFExpansion((1, 4), (4, 1, 2, 3))
          and c == CFExpansion((2, 1), (1, 4, 3, 2))
          and b.value() == quad(36, -2, 39, 19))
    return ok, {"golden_shift": str(a), "conjugate": str(b)}


def check_numeric():
    from .analytic import eval_modular, faber_qexp, val_table, verify_cocycle, xi_of

    detail = {}
    ok = True
    worst = 0.0
    for g in (G1, G2, G3, Mat2(5, 2, 2, 1), Mat2(4, 1, 3, 1)):
        if discriminant(g) > 100:
            continue
        v0 = val_table(g, 0)[0]
        worst = max(worst, abs(v0 - 2 * math.log(xi_of(g))) / v0)
    detail["val0_rel_err"] = worst
    ok &= worst < 1e-8
    c1, c2 = faber_qexp(1, 4)[1], faber_qexp(2, 4)[1]
    detail["faber_q1"] = [c1, c2]
    ok &= c1 == 196884 and c2 == 42987520
    e2 = abs(eval_modular("E2star", 1j, 100))
    detail["e2star_i"] = e2
    ok &= e2 < 1e-10
    res = max(verify_cocycle(G1, S, 0.3 + 0.9j)[2], verify_cocycle(G2, S, 0.2 + 1.0j)[2])
    detail["cocycle_residual"] = res
    ok &= res < 1e-4
    return ok, detail


def check_phi_zero_at_translation():
    v = phi_hyp(G1, Mat2(1, 5, 0, 1))
    forms = enumerate_straddling(BQF(1, -1, -1), -1)
    return (v == 0 and len(forms) == 4), {"phi_T5": v}


CHECKS = [
    ("golden_pair", check_golden_pair),
    ("two_classes", check_two_classes),
    ("word_formula", check_word_formula),
    ("expansions", check_expansions),
    ("translation", check_phi_zero_at_translation),
    ("numeric", check_numeric),
]


def run_all():
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a mismatch, reported not raised
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        results.append({"check": name, "ok": bool(ok), "detail": detail})
    return results
