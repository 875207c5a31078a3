"""Elements of SL2(Z): classification, fixed points and normalisation."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvalidMatrix, NotHyperbolic, NotNormalized, ParseError, ScalarInput
from .exact_arith import QuadIrr, quad, sgn


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidMatrix(
                f"matrix ({self.a} {self.b}; {self.c} {self.d}) has determinant "
                f"{self.a * self.d - self.b * self.c}, expected 1"
            )

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inv(self) -> Mat2:
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> Mat2:
        base = self if n >= 0 else self.inv()
        n = abs(n)
        out = I
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    @property
    def trace(self) -> int:
        return self.a + self.d

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"{self.a},{self.b},{self.c},{self.d}"


I = Mat2(1, 0, 0, 1)
T = Mat2(1, 1, 0, 1)
S = Mat2(0, -1, 1, 0)
U = Mat2(1, -1, 1, 0)


def parse_matrix(text: str) -> Mat2:
    """Parse the row-major literal ``"a,b,c,d"``."""
    try:
        parts = [int(p) for p in text.replace(" ", "").split(",")]
    except ValueError as exc:
        raise ParseError(f"cannot parse matrix {text!r}") from exc
    if len(parts) != 4:
        raise ParseError(f"matrix literal needs 4 entries, got {len(parts)}")
    return Mat2(*parts)


class MatClass(enum.Enum):
    SCALAR = "Scalar"
    PARABOLIC = "Parabolic"
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"


def is_scalar(m: Mat2) -> bool:
    return m.b == 0 and m.c == 0 and m.a == m.d


def classify(m: Mat2) -> MatClass:
    t = abs(m.trace)
    if is_scalar(m):
        return MatClass.SCALAR
    if t == 2:
        return MatClass.PARABOLIC
    if t < 2:
        return MatClass.ELLIPTIC
    return MatClass.HYPERBOLIC


def _require_hyperbolic(m: Mat2):
    if abs(m.trace) <= 2:
        raise NotHyperbolic(f"matrix {m} is not hyperbolic (|trace| = {abs(m.trace)})")


def is_normalized(m: Mat2) -> bool:
    return m.c > 0 and m.trace > 2


def require_normalized(m: Mat2):
    _require_hyperbolic(m)
    if not is_normalized(m):
        raise NotNormalized(f"matrix {m} needs c > 0 and trace > 2")


def discriminant(m: Mat2) -> int:
    return m.trace ** 2 - 4


def assoc_form(m: Mat2):
    """The quadratic form ``[c, d-a, -b]`` attached to ``m``."""
    from .qforms import BQF

    if is_scalar(m):
        raise ScalarInput("the scalar matrices have no associated form")
    return BQF(m.c, m.d - m.a, -m.b)


def fixed_points(m: Mat2, kernel: int = 0) -> tuple[QuadIrr, QuadIrr]:
    """Return ``(w, w')`` with ``w > w'``.

    ``kernel`` optionally gives the squarefree part of the discriminant.
    """
    _require_hyperbolic(m)
    D = discriminant(m)
    u = quad(m.a - m.d, 1, D, 2 * m.c, kernel)
    v = quad(m.a - m.d, -1, D, 2 * m.c, kernel)
    return (u, v) if m.c > 0 else (v, u)


def normalize_hyperbolic(m: Mat2) -> tuple[Mat2, str]:
    """Pick the member of ``{m, -m, m^-1, -m^-1}`` with ``c > 0`` and trace > 2.

    The tag is one of ``"m"``, ``"-m"``, ``"m^-1"``, ``"-m^-1"``.
    """
    _require_hyperbolic(m)
    for tag, n in (("m", m), ("-m", -m), ("m^-1", m.inv()), ("-m^-1", -m.inv())):
        if is_normalized(n):
            return n, tag
    raise AssertionError("unreachable: hyperbolic matrices always normalise")


def attracting_fixed_point(m: Mat2) -> QuadIrr:
    w, wp = fixed_points(m)
    return w if sgn(m.c * m.trace) > 0 else wp


def is_primitive(m: Mat2) -> bool:
    from .contfrac import hyperbolic_to_word

    require_normalized(m)
    return hyperbolic_to_word(m)[2] == 1
