"""Indefinite binary quadratic forms, reduction cycles and straddle lists.

A form ``[A, B, C]`` straddles a real point ``x`` when its roots satisfy
``w' < x < w``.  For rational ``x = u/v`` this is the integer test
``A * Q(u, v) < 0``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

from .errors import DegenerateLeadingCoefficient, ParseError
from .exact_arith import QuadIrr, qi_compare, quad, sgn
from .modular_group import Mat2


@dataclass(frozen=True, order=True)
class BQF:
    A: int
    B: int
    C: int

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.A, self.B), self.C)

    @property
    def sgn(self) -> int:
        return sgn(self.A) if self.A else sgn(self.C)

    def __neg__(self) -> BQF:
        return BQF(-self.A, -self.B, -self.C)

    def __call__(self, x, y=1):
        return self.A * x * x + self.B * x * y + self.C * y * y

    def as_list(self) -> list[int]:
        return [self.A, self.B, self.C]

    def __str__(self):
        return f"[{self.A},{self.B},{self.C}]"


def parse_form(text: str) -> BQF:
    try:
        parts = [int(t) for t in text.replace(" ", "").strip("[]").split(",")]
    except ValueError as exc:
        raise ParseError(f"cannot parse form {text!r}") from exc
    if len(parts) != 3:
        raise ParseError("a form literal needs three coefficients")
    q = BQF(*parts)
    D = q.disc
    if D <= 0 or math.isqrt(D) ** 2 == D:
        raise ParseError(f"form {q} must have positive non-square discriminant")
    return q


def form_action(q: BQF, g: Mat2) -> BQF:
    """Coefficients of ``Q(aX + bY, cX + dY)``."""
    A, B, C = q.A, q.B, q.C
    a, b, c, d = g.a, g.b, g.c, g.d
    return BQF(
        A * a * a + B * a * c + C * c * c,
        2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
        A * b * b + B * b * d + C * d * d,
    )


def roots(q: BQF) -> tuple[QuadIrr, QuadIrr]:
    """Roots ``(w, w')`` of ``Q(z, 1)`` with ``w > w'``."""
    if q.A == 0:
        raise DegenerateLeadingCoefficient(f"form {q} has A = 0")
    u = quad(-q.B, 1, q.disc, 2 * q.A)
    v = quad(-q.B, -1, q.disc, 2 * q.A)
    return (u, v) if q.A > 0 else (v, u)


def straddles(q: BQF, x) -> bool:
    """Exact test ``w' < x < w``; ``x`` rational or quadratic irrational."""
    if isinstance(x, QuadIrr):
        w, wp = roots(q)
        lo, hi = qi_compare(wp, x), qi_compare(x, w)
        if lo == 0 or hi == 0:
            raise AssertionError(f"point {x} is a root of {q}")
        return lo < 0 and hi < 0
    x = Fraction(x)
    u, v = x.numerator, x.denominator
    return q.A * q(u, v) < 0


# -- reduction -------------------------------------------------------------

def is_reduced(q: BQF) -> bool:
    s = math.isqrt(q.disc)
    a2 = 2 * abs(q.A)
    return 0 < q.B <= s and a2 + q.B > s and a2 - q.B <= s


def _rho(q: BQF, s: int, D: int) -> BQF:
    """``Q o (0 -1; 1 t)`` with the standard choice of ``t``."""
    c = q.C
    ac = abs(c)
    m = 2 * ac
    if c * c > D:
        lo = -ac + 1
    else:
        lo = s + 1 - m
    r = lo + ((-q.B - lo) % m)
    return BQF(c, r, (r * r - D) // (4 * c))


@dataclass(frozen=True)
class FormClass:
    representative: BQF
    cycle: tuple[BQF, ...]

    @property
    def disc(self) -> int:
        return self.representative.disc

    @property
    def content(self) -> int:
        return self.representative.content


@lru_cache(maxsize=8192)
def _cycle_of(q: BQF) -> tuple[BQF, ...]:
    D = q.disc
    s = math.isqrt(D)
    if D <= 0 or s * s == D:
        raise ValueError(f"form {q} is not indefinite with non-square discriminant")
    seen = set()
    while not is_reduced(q):
        q = _rho(q, s, D)
        if q in seen:
            raise AssertionError("reduction failed to terminate")
        seen.add(q)
    cyc = [q]
    nxt = _rho(q, s, D)
    while nxt != q:
        cyc.append(nxt)
        nxt = _rho(nxt, s, D)
    k = cyc.index(min(cyc, key=lambda f: (f.A, f.B, f.C)))
    return tuple(cyc[k:] + cyc[:k])


def reduce_cycle(q: BQF) -> FormClass:
    return FormClass(q, _cycle_of(q))


def _as_class(cls: Union[FormClass, BQF]) -> FormClass:
    return cls if isinstance(cls, FormClass) else reduce_cycle(cls)


def gamma_equivalent(q1: BQF, q2: BQF) -> bool:
    if q1.disc != q2.disc or q1.content != q2.content:
        return False
    return _cycle_of(q1) == _cycle_of(q2)


def in_class(cls: FormClass, q: BQF) -> bool:
    return q.disc == cls.disc and q.content == cls.content and _cycle_of(q) == cls.cycle


# -- simple forms (straddling 0) -------------------------------------------

_TS = Mat2(1, 1, 0, 1)
_L = Mat2(1, 0, 1, 1)
_S = Mat2(0, -1, 1, 0)


@lru_cache(maxsize=4096)
def _simple_forms(cycle: tuple[BQF, ...]) -> tuple[BQF, ...]:
    """All forms of the class with ``AC < 0``, found by walking Farey edges."""
    start = cycle[0]
    out = set()
    for q0 in (start, form_action(start, _S)):
        q = q0
        while True:
            out.add(q)
            # positive root beyond 1: the geodesic next crosses the edge (1, oo)
            q = form_action(q, _TS if q.A * (q.A + q.B + q.C) < 0 else _L)
            if q == q0:
                break
            if len(out) > 4 * q0.disc + 16:
                raise AssertionError("simple-form walk did not close")
    return tuple(sorted(out))


def simple_forms(cls: Union[FormClass, BQF]) -> list[BQF]:
    return list(_simple_forms(_as_class(cls).cycle))


# -- straddle enumeration ------------------------------------------------------

def _rational_cusp(x) -> tuple[int, int]:
    """Write ``x = -d/c`` with ``c > 0`` and return ``(c, d)``."""
    x = Fraction(x)
    return x.denominator, -x.numerator


def _divisors(n: int) -> list[int]:
    from sympy import divisors

    return divisors(n)


def _divisor_chunk(ns: Iterable[int], c: int, d: int, D: int) -> list[BQF]:
    out = []
    for n in ns:
        M = (c * c * D - n * n) // 4
        for A in _divisors(M):
            num = n + 2 * d * A
            if num % c:
                continue
            B = num // c
            if (B * B - D) % (4 * A):
                continue
            C = (B * B - D) // (4 * A)
            out.append(BQF(A, B, C))
            out.append(BQF(-A, -B, -C))
    return out


def _enumerate_divisor(cls: FormClass, x, threads: int = 1) -> list[BQF]:
    c, d = _rational_cusp(x)
    D = cls.disc
    bound = math.isqrt(c * c * D)  # |n| < c sqrt(D), and c^2 D is never a square
    ns = [n for n in range(-bound, bound + 1) if (c * c * D - n * n) % 4 == 0]
    if threads > 1 and len(ns) > 64:
        chunks = [ns[i::threads] for i in range(threads)]
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda ch: _divisor_chunk(ch, c, d, D), chunks))
        cands = [f for p in parts for f in p]
    else:
        cands = _divisor_chunk(ns, c, d, D)
    return sorted({f for f in cands if in_class(cls, f)})


def _convergent_edges(x) -> list[Mat2]:
    """Matrices mapping the edge (oo, 0) onto the convergent chain of ``x``."""
    from .contfrac import cf_of_rational

    p2, q2, p1, q1 = 0, 1, 1, 0
    edges = []
    for a in cf_of_rational(x).preperiod:
        p, q = a * p1 + p2, a * q1 + q2
        if p1 * q - p * q1 == 1:
            edges.append(Mat2(p1, p, q1, q))
        else:
            edges.append(Mat2(p1, -p, q1, -q))
        p2, q2, p1, q1 = p1, q1, p, q
    return edges


def _enumerate_farey(cls: FormClass, x) -> list[BQF]:
    simple = _simple_forms(cls.cycle)
    x = Fraction(x)
    out = set()
    for g in _convergent_edges(x):
        gi = g.inv()
        for f in simple:
            q = form_action(f, gi)
            if straddles(q, x):
                out.add(q)
    return sorted(out)


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("RSYM_THREADS", "1")))
    except ValueError:
        return 1


def enumerate_straddling(cls: Union[FormClass, BQF], x, method: str = "auto",
                         threads: Optional[int] = None) -> list[BQF]:
    """All forms in the class whose roots straddle the rational ``x``.

    ``method`` is ``"divisor"`` (bounded search over the middle coefficient
    and divisors), ``"farey"`` (images of the simple forms along the
    convergents of ``x``) or ``"auto"``.  Output is sorted by ``(A, B, C)``.
    """
    cls = _as_class(cls)
    x = Fraction(x)
    if method == "auto":
        c = x.denominator
        method = "divisor" if c * c * cls.disc <= 400 else "farey"
    if method == "divisor":
        return _enumerate_divisor(cls, x, threads or default_threads())
    if method == "farey":
        return _enumerate_farey(cls, x)
    raise ValueError(f"unknown enumeration method {method!r}")


def filter_straddle_point(forms: Iterable[BQF], p) -> list[BQF]:
    return [f for f in forms if straddles(f, p)]


def brute_force_straddling(cls: Union[FormClass, BQF], x, bound: int) -> list[BQF]:
    """Slow reference: search ``|A|, |B| <= bound``."""
    cls = _as_class(cls)
    D = cls.disc
    x = Fraction(x)
    out = []
    for A in range(-bound, bound + 1):
        if A == 0:
            continue
        for B in range(-bound, bound + 1):
            if (B * B - D) % (4 * A):
                continue
            f = BQF(A, B, (B * B - D) // (4 * A))
            if straddles(f, x) and in_class(cls, f):
                out.append(f)
    return sorted(out)
