"""Exact rationals, real quadratic irrationals and the projective line.

Rationals are plain :class:`fractions.Fraction` values.  A :class:`QuadIrr`
is a number ``(p + q*sqrt(d))/r`` stored in canonical form (``r > 0``,
``gcd(p, q, r) = 1``, ``d`` squarefree), so equality of values is equality
of fields.  Orderings between numbers with different radicands are decided
exactly by sign-tracked squaring.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .errors import ParseError


class _Infinity:
    """The point at infinity of P^1(Q)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def sgn(x) -> int:
    return (x > 0) - (x < 0)


_TRIAL_LIMIT = 10 ** 4


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(f, m)`` with ``n == f*f*m`` and ``m`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("squarefree_split needs a positive integer")
    f, odd, m = 1, 1, n
    p = 2
    while p * p * p <= m and p < _TRIAL_LIMIT:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            f *= p ** (e // 2)
            if e % 2:
                odd *= p
        p += 1 if p == 2 else 2
    if p * p * p <= m:
        # large cofactor: hand it to a real factoring routine
        from sympy import factorint

        for pr, e in factorint(m).items():
            f *= pr ** (e // 2)
            if e % 2:
                odd *= pr
        return f, odd
    # the cofactor has at most two prime factors, both above the bound
    s = math.isqrt(m)
    if m > 1 and s * s == m:
        f *= s
        m = 1
    return f, m * odd


def _sign_ab(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for non-square ``d > 0``."""
    sa, sb = sgn(a), sgn(b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    return sa * sgn(a * a - b * b * d)


def _sign_abc(a: int, b: int, d1: int, c: int, d2: int) -> int:
    """Sign of ``a + b*sqrt(d1) + c*sqrt(d2)`` (d1, d2 non-square, d1 != d2)."""
    s1 = _sign_ab(a, b, d1)
    s2 = sgn(c)
    if s1 == 0:
        return s2
    if s2 == 0 or s1 == s2:
        return s1
    # |a + b sqrt(d1)| vs |c| sqrt(d2): compare squares
    t = _sign_ab(a * a + b * b * d1 - c * c * d2, 2 * a * b, d1)
    return s1 * t


@dataclass(frozen=True)
class QuadIrr:
    """Real quadratic irrational ``(p + q*sqrt(d))/r`` in canonical form.

    Use :func:`quad` to build values from arbitrary integer data; the
    constructor assumes the fields are already canonical.
    """

    p: int
    q: int
    d: int
    r: int

    def __post_init__(self):
        if self.q == 0 or self.r <= 0 or self.d <= 1 or math.isqrt(self.d) ** 2 == self.d:
            raise ValueError(f"non-canonical QuadIrr fields {self!r}")

    # -- arithmetic -----------------------------------------------------
    def conjugate(self) -> QuadIrr:
        return QuadIrr(self.p, -self.q, self.d, self.r)

    def __neg__(self):
        return QuadIrr(-self.p, -self.q, self.d, self.r)

    def _coerce(self, other):
        """Return ``(P, Q, R)`` meaning ``(P + Q*sqrt(self.d))/R``."""
        if isinstance(other, QuadIrr):
            if other.d != self.d:
                raise ValueError("arithmetic across different radicands is not supported")
            return other.p, other.q, other.r
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        P, Q, R = c
        return quad(self.p * R + P * self.r, self.q * R + Q * self.r, self.d, self.r * R, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        P, Q, R = c
        return quad(self.p * R - P * self.r, self.q * R - Q * self.r, self.d, self.r * R, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        P, Q, R = c
        p, q, d = self.p, self.q, self.d
        return quad(p * P + q * Q * d, p * Q + q * P, d, self.r * R, d)

    __rmul__ = __mul__

    def reciprocal(self) -> QuadIrr:
        # r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
        n = self.p * self.p - self.q * self.q * self.d
        return quad(self.r * self.p, -self.r * self.q, self.d, n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadIrr):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                raise ZeroDivisionError("QuadIrr division by zero")
            return self * (1 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * Fraction(other)
        return NotImplemented

    # -- ordering -------------------------------------------------------
    def __lt__(self, other):
        return qi_compare(self, other) < 0

    def __le__(self, other):
        return qi_compare(self, other) <= 0

    def __gt__(self, other):
        return qi_compare(self, other) > 0

    def __ge__(self, other):
        return qi_compare(self, other) >= 0

    def floor(self) -> int:
        """Exact floor."""
        # floor((p + q sqrt d)/r) with r > 0
        s = math.isqrt(self.q * self.q * self.d)
        if self.q > 0:
            return (self.p + s) // self.r
        return (self.p - s - 1) // self.r

    def __float__(self):
        return float(Fraction(self.p, self.r)) + float(Fraction(self.q, self.r)) * math.sqrt(self.d)

    def to_mpf(self, dps: int = 50):
        import mpmath

        with mpmath.workdps(dps):
            return (mpmath.mpf(self.p) + self.q * mpmath.sqrt(self.d)) / self.r

    def __str__(self):
        return format_number(self)


Number = Union[int, Fraction, QuadIrr]


def quad(p: int, q: int, d: int, r: int, kernel: int = 0):
    """Canonical value of ``(p + q*sqrt(d))/r``; a Fraction when it is rational.

    ``kernel`` may name the squarefree part of ``d`` when the caller knows
    it, which skips factoring ``d``.
    """
    if r == 0:
        raise ZeroDivisionError("zero denominator")
    if d < 0:
        raise ValueError("only real quadratic irrationals are supported")
    if q == 0 or d == 0:
        return Fraction(p, r)
    f = 0
    if kernel > 1 and d % kernel == 0:
        f = math.isqrt(d // kernel)
        if f * f * kernel != d:
            f = 0
    if f:
        m = kernel
    else:
        f, m = squarefree_split(d)
    q *= f
    if m == 1:
        return Fraction(p + q, r)
    if r < 0:
        p, q, r = -p, -q, -r
    g = math.gcd(math.gcd(p, q), r)
    return QuadIrr(p // g, q // g, m, r // g)


def qi_conjugate(x: QuadIrr) -> QuadIrr:
    return x.conjugate()


def _parts(x):
    if isinstance(x, QuadIrr):
        return x.p, x.q, x.d, x.r
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return x.numerator, 0, 0, x.denominator
    raise TypeError(f"cannot compare {type(x).__name__}")


def qi_compare(x, y) -> int:
    """Exact three-way comparison of rationals and quadratic irrationals.

    Returns -1, 0 or 1.
    """
    p1, q1, d1, r1 = _parts(x)
    p2, q2, d2, r2 = _parts(y)
    a = p1 * r2 - p2 * r1
    b = q1 * r2
    c = -q2 * r1
    if d1 == d2 or c == 0 or b == 0:
        if b == 0:
            b, d1 = c, d2
            c = 0
        elif d1 == d2:
            b, c = b + c, 0
        if b == 0:
            return sgn(a)
        return _sign_ab(a, b, d1)
    return _sign_abc(a, b, d1, c, d2)


def mobius_apply(g, x):
    """Image of ``x`` (rational, QuadIrr or INF) under ``z -> (az+b)/(cz+d)``."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if x is INF:
        return INF if c == 0 else Fraction(a, c)
    if isinstance(x, QuadIrr):
        # (P + Q sqrt D)/(R + S sqrt D), then rationalise
        P, Q = a * x.p + b * x.r, a * x.q
        R, S = c * x.p + d * x.r, c * x.q
        D = x.d
        return quad(P * R - Q * S * D, Q * R - P * S, D, R * R - S * S * D, D)
    x = Fraction(x)
    den = c * x + d
    if den == 0:
        return INF
    return (a * x + b) / den


# -- text forms -----------------------------------------------------------

_QI_RE = re.compile(
    r"""^\(?\s*(?P<p>[+-]?\d+)?\s*(?P<sign>[+-])?\s*(?P<q>\d+)?\s*\*?\s*
        sqrt\(\s*(?P<d>\d+)\s*\)\s*\)?\s*(?:/\s*(?P<r>[+-]?\d+))?$""",
    re.VERBOSE,
)


def format_number(x) -> str:
    if x is INF:
        return "oo"
    if isinstance(x, QuadIrr):
        return f"({x.p}{'+' if x.q > 0 else '-'}{abs(x.q)}*sqrt({x.d}))/{x.r}"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_number(text: str):
    """Parse ``"p/q"``, ``"oo"`` or ``"(p+q*sqrt(d))/r"``."""
    s = text.strip().replace(" ", "")
    if s in ("oo", "inf", "infinity"):
        return INF
    if "sqrt" not in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse number {text!r}") from exc
    m = _QI_RE.match(s)
    if not m:
        raise ParseError(f"cannot parse quadratic irrational {text!r}")
    p = int(m["p"]) if m["p"] else 0
    q = int(m["q"]) if m["q"] else 1
    if m["sign"] == "-":
        q = -q
    elif m["sign"] is None and m["p"] and m["q"] is None:
        # "(3sqrt(5))": p matched the coefficient
        p, q = 0, p
    r = int(m["r"]) if m["r"] else 1
    if r == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return quad(p, q, int(m["d"]), r)
