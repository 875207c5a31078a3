"""Continued fractions of rationals and real quadratic irrationals.

Expansions are stored with a preperiod and a period.  The stored period is
the minimal *even* period and the preperiod is padded to even length, so
that preperiod and period words both give matrices in SL2(Z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InvalidMatrix, ParseError, PreconditionViolated
from .exact_arith import QuadIrr, qi_compare, qi_conjugate
from .modular_group import I, Mat2, fixed_points, require_normalized


@dataclass(frozen=True)
class CFExpansion:
    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()
    # squarefree part of the discriminant when known; saves factoring
    kernel: int = field(default=0, compare=False, repr=False)

    def value(self):
        """Exact value: a Fraction for finite expansions, else a QuadIrr."""
        if not self.period:
            return finite_value(self.preperiod)
        y = periodic_value(self.period, self.kernel)
        for k in reversed(self.preperiod):
            y = y.reciprocal() + k
        return y

    def __str__(self):
        pre = ",".join(map(str, self.preperiod))
        if not self.period:
            return pre
        return pre + ";" + ",".join(map(str, self.period))


def parse_cf(text: str) -> CFExpansion:
    """Parse ``"2,1;1,4,3,2"`` (preperiod ; period)."""
    s = text.replace(" ", "")
    pre_s, _, per_s = s.partition(";")
    try:
        pre = tuple(int(t) for t in pre_s.split(",") if t)
        per = tuple(int(t) for t in per_s.split(",") if t)
    except ValueError as exc:
        raise ParseError(f"cannot parse continued fraction {text!r}") from exc
    if any(a < 1 for a in per) or any(k < 1 for k in pre[1:]):
        raise ParseError("continued fraction entries after the first must be positive")
    if not pre and not per:
        raise ParseError("empty continued fraction")
    return canonical(pre, per) if per else CFExpansion(pre)


def parse_word(text: str) -> tuple[int, ...]:
    try:
        w = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise ParseError(f"cannot parse word {text!r}") from exc
    check_word(w)
    return w


def check_word(w: Sequence[int]):
    if not w or len(w) % 2 or any(a < 1 for a in w):
        raise ParseError(f"a word must be a nonempty even-length list of positive integers, got {list(w)}")


def finite_value(entries: Sequence[int]) -> Fraction:
    y = Fraction(entries[-1])
    for k in reversed(entries[:-1]):
        y = k + 1 / y
    return y


def cf_of_rational(x) -> CFExpansion:
    x = Fraction(x)
    n, d = x.numerator, x.denominator
    out = []
    while d:
        q, r = divmod(n, d)
        out.append(q)
        n, d = d, r
    return CFExpansion(tuple(out))


def word_product(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Entries of the product of ``(a 1; 1 0)`` over the word (any length)."""
    a, b, c, d = 1, 0, 0, 1
    for k in word:
        a, b, c, d = a * k + b, a, c * k + d, c
    return a, b, c, d


def word_to_matrix(word: Sequence[int]) -> Mat2:
    if len(word) % 2:
        raise InvalidMatrix("odd-length words give determinant -1")
    return Mat2(*word_product(word)) if word else I


def periodic_value(word: Sequence[int], kernel: int = 0) -> QuadIrr:
    """Value of the purely periodic expansion with the given period."""
    word = tuple(word)
    if len(word) % 2:
        word = word * 2
    return fixed_points(word_to_matrix(word), kernel)[0]


def compare_periodic_values(word_a: Sequence[int], word_b: Sequence[int]) -> int:
    return qi_compare(periodic_value(word_a), periodic_value(word_b))


def _min_period(per: tuple[int, ...]) -> tuple[int, ...]:
    n = len(per)
    for p in range(1, n + 1):
        if n % p == 0 and per[:p] * (n // p) == per:
            return per[:p]
    return per


def _natural(pre, per) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Shortest preperiod and period describing the same expansion."""
    pre, per = list(pre), tuple(per)
    per = _min_period(per)
    while pre and pre[-1] == per[-1]:
        pre.pop()
        per = per[-1:] + per[:-1]
    return tuple(pre), per


def canonical(pre, per, kernel: int = 0) -> CFExpansion:
    """Minimal even period with an even-length preperiod."""
    pre, per = _natural(pre, per)
    if len(per) % 2:
        per = per * 2
    if len(pre) % 2:
        pre = pre + per[:1]
        per = per[1:] + per[:1]
    return CFExpansion(pre, per, kernel)


def _pqn(x: QuadIrr) -> tuple[int, int, int]:
    """Write ``x = (P + sqrt(N))/Q`` with ``Q | N - P^2``."""
    if x.q > 0:
        P, N, Q = x.p, x.q * x.q * x.d, x.r
    else:
        P, N, Q = -x.p, x.q * x.q * x.d, -x.r
    if (N - P * P) % Q:
        P, N, Q = P * abs(Q), N * Q * Q, Q * abs(Q)
    return P, N, Q


def natural_expansion(x: QuadIrr) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Minimal preperiod and minimal period of ``x`` (no parity padding)."""
    P, N, Q = _pqn(x)
    s = math.isqrt(N)
    seen: dict[tuple[int, int], int] = {}
    terms: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(terms)
        a = (P + s) // Q if Q > 0 else (-P - s - 1) // -Q
        terms.append(a)
        P = a * Q - P
        Q = (N - P * P) // Q
    j = seen[(P, Q)]
    return tuple(terms[:j]), tuple(terms[j:])


def cf_of_quadirr(x: QuadIrr) -> CFExpansion:
    return canonical(*natural_expansion(x), kernel=x.d)


def _absorb_zeros(pre: list[int], per: tuple[int, ...]):
    """Apply ``[.., a, 0, b, ..] = [.., a+b, ..]`` to inner zeros."""
    i = 1
    while i < len(pre):
        if pre[i] != 0:
            i += 1
            continue
        if i + 1 < len(pre):
            pre[i - 1] += pre[i + 1]
            del pre[i:i + 2]
        else:
            pre[i - 1] += per[0]
            del pre[i]
            per = per[1:] + per[:1]
        i = max(i - 1, 1)
    return pre, per


def conjugate_expansion(x: CFExpansion) -> CFExpansion:
    """Expansion of the Galois conjugate, computed from the expansion alone."""
    if not x.period:
        raise PreconditionViolated("conjugate_expansion needs a periodic expansion")
    # bring the preperiod to its shortest form, which makes k_{r-1} != a_last
    k, a = _natural(x.preperiod, x.period)
    if len(a) % 2:
        a = a * 2
    k = list(k)
    r = len(k)
    if r and k[-1] == a[-1]:
        raise PreconditionViolated("last preperiod entry equals last period entry")
    rev = a[::-1]
    if r == 0:
        pre = [-1, 1, rev[0] - 1]
        per = rev[1:] + rev[:1]
    elif r == 1 or k[-1] > a[-1]:
        pre = k[:-1] + [k[-1] - a[-1] - 1, 1, rev[1] - 1]
        per = rev[2:] + rev[:2]
    else:
        pre = k[:-2] + [k[-2] - 1, 1, a[-1] - k[-1] - 1]
        per = rev[1:] + rev[:1]
    pre, per = _absorb_zeros(pre, per)
    return canonical(pre, per, x.kernel)


def hyperbolic_to_word(m: Mat2) -> tuple[Mat2, tuple[int, ...], int]:
    """Return ``(delta, word, k)`` with ``m = delta * W(word)^k * delta^-1``."""
    require_normalized(m)
    w = fixed_points(m)[0]
    cf = cf_of_quadirr(w)
    delta = word_to_matrix(cf.preperiod)
    g = word_to_matrix(cf.period)
    target = delta.inv() @ m @ delta
    p, k = g, 1
    while p.trace < target.trace:
        p, k = p @ g, k + 1
    if p != target:
        raise AssertionError(f"stabiliser mismatch for {m}")
    return delta, cf.period, k


def orbit_shift_membership(w_target, word: Sequence[int]) -> Optional[tuple[int, int]]:
    """Locate ``w_target`` in the orbit of the purely periodic value of ``word``.

    Returns ``(r, i)``: ``r`` is the preperiod length of the canonical
    expansion of ``w_target`` and its period is ``word`` rotated to start at
    index ``i``, with ``i = r (mod 2)``.  ``None`` when not in the orbit.
    """
    if not isinstance(w_target, QuadIrr):
        return None
    word = tuple(word)
    if len(word) % 2:
        word = word * 2
    cf = cf_of_quadirr(w_target)
    per = cf.period
    if len(word) % len(per):
        return None
    per = per * (len(word) // len(per))
    r = len(cf.preperiod)
    for i in range(len(word)):
        if i % 2 == r % 2 and word[i:] + word[:i] == per:
            return r, i
    return None


def conjugate_value(x: CFExpansion):
    """Oracle used in tests: conjugate through exact arithmetic."""
    return qi_conjugate(x.value())
