"""Dedekind sums and the classical Dedekind and Rademacher symbols."""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import NotCoprime, ScalarInput
from .exact_arith import sgn
from .modular_group import Mat2, is_scalar


class ClassicalMethod(enum.Enum):
    DEDEKIND_FORMULA = "formula"
    CF_WORD = "cf"


@dataclass(frozen=True)
class ClassicalSymbolReport:
    phi: Union[Fraction, None]
    psi: int
    method: ClassicalMethod


def dedekind_sum(a: int, c: int) -> Fraction:
    """``s(a, c) = sum_{k=1}^{c-1} ((k/c)) ((ka/c))`` as an exact rational."""
    if c <= 0:
        raise ValueError("dedekind_sum needs c > 0")
    if math.gcd(a, c) != 1:
        raise NotCoprime(f"gcd({a}, {c}) != 1")
    # reciprocity: s(a,c) + s(c,a) = -1/4 + (a/c + c/a + 1/(ac)) / 12, walked down Euclid
    total = Fraction(0)
    sign = 1
    a %= c
    while c > 1 and a:
        total += sign * (Fraction(a * a + c * c + 1, 12 * a * c) - Fraction(1, 4))
        sign = -sign
        a, c = c % a, a
    return total


def phi_classical(m: Mat2) -> Fraction:
    if is_scalar(m):
        raise ScalarInput("the symbol is not defined on +-I")
    a, b, c, d = m.entries()
    if c == 0:
        return Fraction(b, d)
    val = Fraction(a + d, c) - 12 * sgn(c) * dedekind_sum(a, abs(c))
    assert val.denominator == 1, f"non-integral Dedekind symbol for {m}"
    return val


def psi_classical(m: Mat2) -> int:
    val = phi_classical(m) - 3 * sgn(m.c * m.trace)
    assert val.denominator == 1
    return int(val)


def psi_cf(word: Sequence[int]) -> int:
    return sum(a if j % 2 == 0 else -a for j, a in enumerate(word))


def log_delta(z: complex, terms: int = 200) -> complex:
    """``log Delta(z) = 2 pi i z + 24 sum_n log(1 - q^n)`` (principal logs)."""
    q = cmath.exp(2j * math.pi * z)
    return 2j * math.pi * z + 24 * sum(cmath.log(1 - q ** n) for n in range(1, terms + 1))


def logdelta_gap_check(m: Mat2, z: complex, terms: int = 200) -> float:
    """Residual of the log Delta transformation law at ``z``."""
    a, b, c, d = m.entries()
    mz = (a * z + b) / (c * z + d)
    lhs = log_delta(mz, terms) - log_delta(z, terms)
    s = sgn(c)
    rhs = 2j * math.pi * float(phi_classical(m))
    if s:
        rhs += 12 * cmath.log((c * z + d) / (1j * s))
    return abs(lhs - rhs)
