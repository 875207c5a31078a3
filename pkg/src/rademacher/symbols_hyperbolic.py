"""Hyperbolic Dedekind and Rademacher symbols.

Three independent routes to the Rademacher symbol are provided:

* ``psi_hyp_first``: straddle counts of quadratic forms at the cusp
  ``sigma^-1 oo`` and at the attracting fixed point of ``sigma``;
* ``psi_hyp_second``: a closed formula in the continued-fraction words of
  ``gamma`` and ``sigma``;
* ``intersection_count_oracle``: a brute-force count of intersections of the
  two closed geodesics.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .contfrac import (
    check_word,
    compare_periodic_values,
    finite_value,
    hyperbolic_to_word,
    orbit_shift_membership,
    word_to_matrix,
)
from .errors import NotHyperbolic, NotNormalized, NotPrimitive, ZeroArgument
from .exact_arith import INF, mobius_apply, qi_compare
from .modular_group import (
    Mat2,
    S,
    T,
    assoc_form,
    attracting_fixed_point,
    classify,
    fixed_points,
    MatClass,
    normalize_hyperbolic,
    is_normalized,
)
from .qforms import (
    BQF,
    FormClass,
    enumerate_straddling,
    filter_straddle_point,
    form_action,
    reduce_cycle,
    roots,
    straddles,
)


class HypMethod(enum.Enum):
    FORM_COUNT = "first"
    CF_FORMULA = "second"
    INTERSECTION_ORACLE = "oracle"


@dataclass
class HypSymbolReport:
    phi: Optional[int]
    psi: Optional[int]
    method: HypMethod
    witnesses: dict = field(default_factory=dict)


def _check_gamma(gamma: Mat2, primitive: bool = True):
    if classify(gamma) is not MatClass.HYPERBOLIC:
        raise NotHyperbolic(f"gamma = {gamma} is not hyperbolic")
    if not is_normalized(gamma):
        raise NotNormalized(f"gamma = {gamma} needs c > 0 and trace > 2")
    if primitive and hyperbolic_to_word(gamma)[2] != 1:
        raise NotPrimitive(f"gamma = {gamma} is a proper power")


def gamma_class(gamma: Mat2) -> FormClass:
    return reduce_cycle(assoc_form(gamma))


def cusp_of(sigma: Mat2):
    """``sigma^-1 oo = -d/c`` (``INF`` when ``c = 0``)."""
    return mobius_apply(sigma.inv(), INF)


def phi_hyp(gamma: Mat2, sigma: Mat2, method: str = "auto") -> int:
    _check_gamma(gamma)
    return _phi(gamma_class(gamma), sigma, method)


def _phi(cls: FormClass, sigma: Mat2, method: str = "auto") -> int:
    if sigma.c == 0:
        return 0
    return -len(enumerate_straddling(cls, cusp_of(sigma), method))


def phi_hyp_witnesses(gamma: Mat2, sigma: Mat2, method: str = "auto") -> list[BQF]:
    _check_gamma(gamma)
    if sigma.c == 0:
        return []
    return enumerate_straddling(gamma_class(gamma), cusp_of(sigma), method)


def psi_hyp_first(gamma: Mat2, sigma: Mat2, method: str = "auto") -> HypSymbolReport:
    """Form-count route: ``Phi`` plus twice the forms straddling both points."""
    _check_gamma(gamma)
    if classify(sigma) is not MatClass.HYPERBOLIC:
        raise NotHyperbolic(f"sigma = {sigma} is not hyperbolic")
    sn, tag = normalize_hyperbolic(sigma)
    x = cusp_of(sn)
    w = attracting_fixed_point(sn)
    forms = enumerate_straddling(gamma_class(gamma), x, method)
    both = filter_straddle_point(forms, w)
    phi = -len(forms)
    psi = phi + 2 * len(both)
    return HypSymbolReport(
        phi=phi,
        psi=psi,
        method=HypMethod.FORM_COUNT,
        witnesses={
            "sigma_normalized": sn,
            "normalization": tag,
            "cusp": x,
            "attracting_point": w,
            "straddling": forms,
            "straddling_both": both,
        },
    )


def phi_gamma_S(word: Sequence[int]) -> int:
    return -2 * sum(word)


def straddle_both(cls: FormClass, x, y) -> list[BQF]:
    """Forms of the class whose geodesic separates both ``x`` and ``y`` from oo."""
    if x is INF or y is INF:
        return []
    return filter_straddle_point(enumerate_straddling(cls, x), y)


def e_gamma_count(gamma_cls: FormClass, gamma_word: Sequence[int], x) -> int:
    x = Fraction(x)
    if x == 0:
        raise ZeroArgument("e_gamma is evaluated at nonzero points only")
    return phi_gamma_S(gamma_word) + 2 * len(straddle_both(gamma_cls, Fraction(0), x))


def _cf_ge(b: Sequence[int], a: Sequence[int], strict: bool) -> bool:
    """``[b] >= [a]`` (or ``>``) for finite words; empty comparisons hold."""
    if not b:
        return True
    vb, va = finite_value(b), finite_value(a)
    return vb > va if strict else vb >= va


def e_gamma_closed(gamma_word: Sequence[int], tail: Sequence[int]) -> int:
    """Closed form of ``e_gamma`` at ``(-1)^len(tail)`` times ``[tail]``.

    Odd-length tails ``[b_{2l-1}, ..., b_{2m-1}]`` sit at ``-[tail]`` and
    use non-strict comparisons; even-length tails sit at ``+[tail]`` and use
    strict ones.
    """
    a = list(gamma_word)
    N = len(a)
    n = N // 2
    piv, rest = tail[0], list(tail[1:])
    L = len(rest)

    def A(i):
        return a[i % N]

    total = sum(min(ai, piv) for ai in a)
    corr = 0
    if len(tail) % 2:
        for k in range(n):
            if A(2 * k) >= piv and _cf_ge(rest, [A(2 * k - 1 - t) for t in range(L)], False):
                corr += 1
            if A(2 * k - 1) >= piv and _cf_ge(rest, [A(2 * k + t) for t in range(L)], False):
                corr += 1
    else:
        for k in range(n):
            if A(2 * k) >= piv and _cf_ge(rest, [A(2 * k + 1 + t) for t in range(L)], True):
                corr += 1
            if A(2 * k - 1) >= piv and _cf_ge(rest, [A(2 * k - 2 - t) for t in range(L)], True):
                corr += 1
    return -2 * (total - corr)


def _division_points(sigma_word: Sequence[int]):
    b = list(sigma_word)
    for j in range(1, len(b)):
        tail = b[j:]
        yield tail, (-1) ** j * finite_value(tail)


def phi_hyp_division(gamma_word: Sequence[int], sigma_word: Sequence[int],
                     method: str = "closed") -> int:
    """Phi along the word of ``sigma``, one ``e_gamma`` term per suffix."""
    check_word(gamma_word)
    check_word(sigma_word)
    total = phi_gamma_S(gamma_word)
    if method == "closed":
        for tail, _ in _division_points(sigma_word):
            total += e_gamma_closed(gamma_word, tail)
    elif method == "count":
        cls = gamma_class(word_to_matrix(gamma_word))
        for _, x in _division_points(sigma_word):
            total += e_gamma_count(cls, gamma_word, x)
    else:
        raise ValueError(f"unknown method {method!r}")
    return total


def psi_correction(gamma_word: Sequence[int], sigma_word: Sequence[int]) -> int:
    """The integer ``psi_gamma(sigma)`` of the second explicit formula."""
    a, b = list(gamma_word), list(sigma_word)
    N, M = len(a), len(b)
    n, m = N // 2, M // 2

    def rot_up(w, i):
        i %= len(w)
        return w[i:] + w[:i]

    def rot_down(w, i):
        # w_i, w_{i-1}, ..., w_{i-len+1}
        return [w[(i - t) % len(w)] for t in range(len(w))]

    psi = 0
    for k in range(n):
        a_desc_1 = rot_down(a, 2 * k - 1)
        a_up_0 = rot_up(a, 2 * k)
        a_up_1 = rot_up(a, 2 * k + 1)
        a_desc_2 = rot_down(a, 2 * k - 2)
        for l in range(m):
            b0 = rot_up(b, 2 * l)
            b1 = rot_up(b, 2 * l + 1)
            p_odd, p_even = b[(2 * l - 1) % M], b[(2 * l) % M]
            if a[(2 * k) % N] >= p_odd and compare_periodic_values(b0, a_desc_1) >= 0:
                psi += 1
            if a[(2 * k - 1) % N] >= p_odd and compare_periodic_values(b0, a_up_0) >= 0:
                psi += 1
            if a[(2 * k) % N] >= p_even and compare_periodic_values(b1, a_up_1) > 0:
                psi += 1
            if a[(2 * k - 1) % N] >= p_even and compare_periodic_values(b1, a_desc_2) > 0:
                psi += 1
    return psi


def psi_hyp_second(gamma_word: Sequence[int], sigma_word: Sequence[int]) -> tuple[int, int]:
    """Return ``(Psi, psi_correction)`` from the continued-fraction words."""
    check_word(gamma_word)
    check_word(sigma_word)
    corr = psi_correction(gamma_word, sigma_word)
    n, m = len(gamma_word) // 2, len(sigma_word) // 2
    assert 0 <= corr <= 2 * m * n, f"correction {corr} outside [0, {2 * m * n}]"
    s = sum(min(x, y) for x in gamma_word for y in sigma_word)
    return -2 * (s - corr), corr


def words_of(gamma: Mat2, sigma: Mat2) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Words for ``psi_hyp_second`` from matrices (sigma may be a power)."""
    _check_gamma(gamma)
    sn, _ = normalize_hyperbolic(sigma)
    _, gw, _ = hyperbolic_to_word(gamma)
    _, sw, k = hyperbolic_to_word(sn)
    return gw, sw * k


# -- geodesic intersection oracle -----------------------------------------

@dataclass
class OracleResult:
    count: Optional[int]
    stable: bool
    counts_by_depth: list[int]
    crossings: list[BQF]


def _interlaces(q: BQF, lo, hi) -> bool:
    w, wp = roots(q)
    inside = [qi_compare(lo, r) < 0 and qi_compare(r, hi) < 0 for r in (w, wp)]
    return inside[0] != inside[1]


def _inner_root(q: BQF, lo, hi):
    w, wp = roots(q)
    return w if qi_compare(lo, w) < 0 and qi_compare(w, hi) < 0 else wp


def _canonical_crossing(q: BQF, sigma: Mat2, p, sp, lo, hi) -> BQF:
    """Move the crossing point of ``q`` into ``[p, sigma p)`` along the axis."""
    si = sigma.inv()
    r = _inner_root(q, lo, hi)
    while qi_compare(r, p) < 0:
        q = form_action(q, si)
        r = mobius_apply(sigma, r)
    while qi_compare(r, sp) >= 0:
        q = form_action(q, sigma)
        r = mobius_apply(si, r)
    return q


def geodesics_coincide(gamma: Mat2, sigma: Mat2) -> bool:
    _, gw, _ = hyperbolic_to_word(gamma)
    w = fixed_points(sigma)[0]
    return orbit_shift_membership(w, gw) is not None


def _axis_data(sigma: Mat2):
    from math import isqrt

    w, wp = fixed_points(sigma)
    D = sigma.trace ** 2 - 4
    p = Fraction(sigma.a - sigma.d + isqrt(D), 2 * sigma.c)
    sp = mobius_apply(sigma, p)
    return wp, w, p, sp


def intersection_count_oracle(gamma: Mat2, sigma: Mat2, depth: int = 8,
                              seeds: str = "cycle") -> OracleResult:
    """Breadth-first search over ``Q o g`` for words ``g`` in ``T^{+-1}, S``.

    The search starts from every reduced form in the cycle of ``Q_gamma``
    (``seeds="cycle"``) or from ``Q_gamma`` alone (``seeds="form"``).
    Forms whose roots interlace with the axis of ``sigma`` are reduced modulo
    the action of ``sigma`` and counted.  ``count`` is ``None`` when the two
    closed geodesics coincide.
    """
    _check_gamma(gamma)
    _check_gamma(sigma)
    if geodesics_coincide(gamma, sigma):
        return OracleResult(None, False, [], [])
    lo, hi, p, sp = _axis_data(sigma)
    gens = (T, T.inv(), S)
    start = assoc_form(gamma)
    if seeds == "cycle":
        frontier = deque(sorted({start, *reduce_cycle(start).cycle}))
    elif seeds == "form":
        frontier = deque([start])
    else:
        raise ValueError(f"unknown seeds {seeds!r}")
    seen = set(frontier)
    found: set[BQF] = set()
    counts = []
    for level in range(depth + 1):
        for q in frontier:
            if _interlaces(q, lo, hi):
                found.add(_canonical_crossing(q, sigma, p, sp, lo, hi))
        counts.append(len(found))
        if level == depth:
            break
        nxt = deque()
        for q in frontier:
            for g in gens:
                f = form_action(q, g)
                if f not in seen:
                    seen.add(f)
                    nxt.append(f)
        frontier = nxt
    stable = len(counts) >= 2 and counts[-1] == counts[-2]
    return OracleResult(len(found), stable, counts, sorted(found))


def intersection_count_exact(gamma: Mat2, sigma: Mat2) -> Optional[int]:
    """Exact intersection count via straddle lists at ``p`` and ``sigma p``.

    A crossing normalised into ``(p, sigma p)`` has its outer root below
    ``w'_sigma`` or above ``w_sigma``, so it straddles ``p`` or ``sigma p``.
    """
    _check_gamma(gamma)
    _check_gamma(sigma)
    if geodesics_coincide(gamma, sigma):
        return None
    lo, hi, p, sp = _axis_data(sigma)
    cls = gamma_class(gamma)
    found = set()
    for x in (p, sp):
        for q in enumerate_straddling(cls, x):
            if _interlaces(q, lo, hi):
                r = _inner_root(q, lo, hi)
                if qi_compare(p, r) < 0 and qi_compare(r, sp) < 0:
                    found.add(q)
    return len(found)


# -- cocycle ---------------------------------------------------------------

def phi_cocycle_defect(gamma: Mat2, s1: Mat2, s2: Mat2) -> tuple[int, int]:
    """Return ``(Phi(s1 s2) - Phi(s1) - Phi(s2), 2 * #straddle-both)``."""
    _check_gamma(gamma)
    cls = gamma_class(gamma)
    defect = _phi(cls, s1 @ s2) - _phi(cls, s1) - _phi(cls, s2)
    x = cusp_of(s1)
    y = mobius_apply(s2, INF)
    return defect, 2 * len(straddle_both(cls, x, y))
