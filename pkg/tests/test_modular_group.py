import cmath

import pytest
import sympy
from hypothesis import assume, given

from rademacher.contfrac import word_to_matrix
from rademacher.errors import InvalidMatrix, NotHyperbolic, NotNormalized, ParseError, ScalarInput
from rademacher.exact_arith import INF, mobius_apply, qi_compare, quad
from rademacher.modular_group import (
    I,
    MatClass,
    Mat2,
    S,
    T,
    U,
    assoc_form,
    attracting_fixed_point,
    classify,
    fixed_points,
    is_primitive,
    normalize_hyperbolic,
    parse_matrix,
)
from rademacher.qforms import BQF, form_action, roots

from conftest import sl2, words

G = Mat2(2, 1, 1, 1)


def hyperbolic(g):
    return abs(g.trace) > 2


def test_determinant_checked():
    with pytest.raises(InvalidMatrix):
        Mat2(1, 2, 3, 4)
    with pytest.raises(ParseError):
        parse_matrix("1,2,3")
    assert parse_matrix(" 2, 1,1 ,1") == G


def test_group_basics():
    assert S @ S == -I
    assert U ** 3 == -I
    assert T ** -3 == Mat2(1, -3, 0, 1)
    assert G @ G.inv() == I
    assert G ** 2 == Mat2(5, 3, 3, 2)


def test_classify():
    assert classify(T) is MatClass.PARABOLIC
    assert classify(S) is MatClass.ELLIPTIC
    assert classify(G) is MatClass.HYPERBOLIC
    assert classify(-I) is MatClass.SCALAR
    assert classify(-T) is MatClass.PARABOLIC
    assert classify(U) is MatClass.ELLIPTIC


def test_assoc_form_examples():
    assert assoc_form(G) == BQF(1, -1, -1)
    assert assoc_form(Mat2(3, 2, 1, 1)) == BQF(1, -2, -2)
    assert assoc_form(Mat2(3, 1, 2, 1)) == BQF(2, -2, -1)
    with pytest.raises(ScalarInput):
        assoc_form(-I)


@given(sl2(), sl2())
def test_assoc_form_conjugation(m, g):
    assume(m not in (I, -I))
    assert assoc_form(g.inv() @ m @ g) == form_action(assoc_form(m), g)


@given(sl2())
def test_assoc_form_signs(m):
    assume(m not in (I, -I))
    assert assoc_form(-m) == assoc_form(m.inv()) == -assoc_form(m)


def test_fixed_points_examples():
    assert fixed_points(G) == (quad(1, 1, 5, 2), quad(1, -1, 5, 2))
    assert fixed_points(Mat2(3, 2, 1, 1)) == (quad(1, 1, 3, 1), quad(1, -1, 3, 1))
    x = sympy.Symbol("x")
    sols = sorted(sympy.solve(x ** 2 - 2 * x - 2, x), key=float)
    got = [(w.p + w.q * sympy.sqrt(w.d)) / w.r for w in fixed_points(Mat2(3, 2, 1, 1))]
    assert [sympy.simplify(a - b) for a, b in zip(got, reversed(sols))] == [0, 0]
    with pytest.raises(NotHyperbolic):
        fixed_points(T)


@given(sl2(), sl2())
def test_fixed_points_equivariant(m, g):
    assume(hyperbolic(m))
    conj = g.inv() @ m @ g
    assert set(fixed_points(conj)) == {mobius_apply(g.inv(), w) for w in fixed_points(m)}


@given(sl2())
def test_fixed_points_are_roots(m):
    assume(hyperbolic(m))
    w, wp = fixed_points(m)
    assert qi_compare(w, wp) == 1
    assert {w, wp} == set(roots(assoc_form(m)))
    assert assoc_form(m).disc == m.trace ** 2 - 4


def test_normalize_examples():
    assert normalize_hyperbolic(G) == (G, "m")
    assert normalize_hyperbolic(Mat2(1, -1, -1, 2)) == (G, "m^-1")
    assert normalize_hyperbolic(Mat2(-2, -1, -1, -1)) == (G, "-m")
    with pytest.raises(NotHyperbolic):
        normalize_hyperbolic(S)


@given(sl2())
def test_normalize_idempotent(m):
    assume(hyperbolic(m))
    n, _ = normalize_hyperbolic(m)
    assert normalize_hyperbolic(n) == (n, "m")
    assert attracting_fixed_point(n) == fixed_points(n)[0]
    # sigma^-1 oo sits strictly below the repelling point
    assert qi_compare(mobius_apply(n.inv(), INF), fixed_points(n)[1]) == -1


def test_attracting_examples():
    assert attracting_fixed_point(G) == quad(1, 1, 5, 2)
    assert attracting_fixed_point(G.inv()) == quad(1, -1, 5, 2)


@given(sl2())
def test_attracting_by_iteration(m):
    assume(hyperbolic(m))
    z = 1j
    for _ in range(50):
        z = (m.a * z + m.b) / (m.c * z + m.d)
        if abs(z.imag) < 1e-300:
            break
    w = attracting_fixed_point(m) if m.c else None
    if w is not None and cmath.isfinite(z):
        assert abs(z - float(w)) < 1e-8


def test_primitive():
    assert is_primitive(G)
    assert not is_primitive(G ** 2)
    assert is_primitive(Mat2(3, 2, 1, 1))
    with pytest.raises(NotNormalized):
        is_primitive(G.inv())


@given(words())
def test_power_not_primitive(w):
    g = word_to_matrix(w)
    assert not is_primitive(g ** 2)
