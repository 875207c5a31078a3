from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rademacher.contfrac import word_to_matrix
from rademacher.errors import NotHyperbolic, NotNormalized, NotPrimitive, ZeroArgument
from rademacher.modular_group import I, Mat2, S, T, is_primitive
from rademacher.qforms import BQF
from rademacher.symbols_hyperbolic import (
    e_gamma_closed,
    e_gamma_count,
    gamma_class,
    geodesics_coincide,
    intersection_count_exact,
    intersection_count_oracle,
    phi_cocycle_defect,
    phi_gamma_S,
    phi_hyp,
    phi_hyp_division,
    psi_correction,
    psi_hyp_first,
    psi_hyp_second,
    words_of,
)

from conftest import primitive_words, sl2, words

G = Mat2(2, 1, 1, 1)
G1 = Mat2(3, 2, 1, 1)
G2 = Mat2(3, 1, 2, 1)


def test_phi_examples():
    assert phi_hyp(G, G) == -4
    assert phi_hyp(G1, G) == phi_hyp(G2, G) == -6
    assert phi_hyp(G, T) == 0
    assert phi_hyp(G, T ** 7) == 0


def test_gamma_checks():
    with pytest.raises(NotHyperbolic):
        phi_hyp(T, G)
    with pytest.raises(NotNormalized):
        phi_hyp(G.inv(), G)
    with pytest.raises(NotPrimitive):
        phi_hyp(G ** 2, G)
    with pytest.raises(NotHyperbolic):
        psi_hyp_first(G, S)


def test_psi_first_examples():
    rep = psi_hyp_first(G, G)
    assert (rep.phi, rep.psi) == (-4, -4)
    assert rep.witnesses["straddling_both"] == []
    r1, r2 = psi_hyp_first(G1, G), psi_hyp_first(G2, G)
    assert r1.psi == r2.psi == -4
    assert r1.witnesses["straddling_both"] == [BQF(1, 0, -3)]
    assert r2.witnesses["straddling_both"] == [BQF(-1, 0, 3)]


def test_phi_gamma_S():
    assert phi_gamma_S((2, 1)) == -6
    assert phi_gamma_S((1, 1)) == -4
    assert phi_gamma_S((3,) * 6) == -36
    assert phi_hyp(G1, S) == -6
    assert phi_hyp(G, S) == -4


def test_e_gamma_examples():
    assert e_gamma_count(gamma_class(G1), (2, 1), -1) == 0
    assert e_gamma_count(gamma_class(G), (1, 1), -1) == 0
    assert e_gamma_closed((2, 1), (1,)) == 0
    assert e_gamma_closed((1, 1), (1,)) == 0
    with pytest.raises(ZeroArgument):
        e_gamma_count(gamma_class(G), (1, 1), 0)


@given(primitive_words(), words(5, 3), st.integers(1, 5))
def test_e_gamma_closed_vs_count(gw, sw, j):
    j = 1 + j % (len(sw) - 1) if len(sw) > 1 else 1
    assume(j < len(sw))
    tail = sw[j:]
    x = (-1) ** len(tail) * _finite(tail)
    cls = gamma_class(word_to_matrix(gw))
    assert e_gamma_closed(gw, tail) == e_gamma_count(cls, gw, x)


def _finite(w):
    y = Fraction(w[-1])
    for k in reversed(w[:-1]):
        y = k + 1 / y
    return y


def test_division_examples():
    assert phi_hyp_division((2, 1), (1, 1)) == -6
    assert phi_hyp_division((1, 1), (1, 1)) == -4


@given(primitive_words(), words())
def test_division_matches_count(gw, sw):
    want = phi_hyp(word_to_matrix(gw), word_to_matrix(sw))
    assert phi_hyp_division(gw, sw) == phi_hyp_division(gw, sw, "count") == want


def test_second_examples():
    assert psi_hyp_second((2, 1), (1, 1)) == (-4, 2)
    assert psi_hyp_second((1, 1), (1, 1)) == (-4, 2)
    assert psi_correction((2, 1), (1, 1)) == 2


@given(primitive_words(), primitive_words())
def test_first_equals_second(gw, sw):
    g, s = word_to_matrix(gw), word_to_matrix(sw)
    first = psi_hyp_first(g, s).psi
    second, corr = psi_hyp_second(gw, sw)
    assert first == second
    assert second % 2 == 0 and second <= -2
    assert psi_hyp_first(g, s).phi <= 0
    assert 0 <= corr <= len(gw) * len(sw) // 2


@given(primitive_words(), primitive_words(), sl2())
def test_class_invariance(gw, sw, g):
    gamma, sigma = word_to_matrix(gw), word_to_matrix(sw)
    assert psi_hyp_first(gamma, g.inv() @ sigma @ g).psi == psi_hyp_first(gamma, sigma).psi


@given(primitive_words(), primitive_words(), st.sampled_from([2, 3]))
def test_homogeneity(gw, sw, k):
    gamma, sigma = word_to_matrix(gw), word_to_matrix(sw)
    base = psi_hyp_first(gamma, sigma).psi
    assert psi_hyp_first(gamma, sigma ** k).psi == k * base
    assert psi_hyp_second(gw, sw * k)[0] == k * base
    assert words_of(gamma, sigma ** k)[1] == sw * k


@given(primitive_words(), primitive_words())
def test_symmetry_experiment(gw, sw):
    # recorded finding: no asymmetric pair has turned up
    assert psi_hyp_second(gw, sw)[0] == psi_hyp_second(sw, gw)[0]


@given(primitive_words(), sl2())
def test_phi_sigma_symmetries(gw, s):
    gamma = word_to_matrix(gw)
    v = phi_hyp(gamma, s)
    assert phi_hyp(gamma, s.inv()) == phi_hyp(gamma, -s) == v
    assert phi_hyp(gamma, T @ s) == phi_hyp(gamma, T.inv() @ s) == v
    assert v <= 0


@given(primitive_words(), sl2(), sl2())
def test_cocycle(gw, s1, s2):
    defect, both = phi_cocycle_defect(word_to_matrix(gw), s1, s2)
    assert defect == both


def test_cocycle_examples():
    assert phi_cocycle_defect(G, T, S) == (0, 0)
    assert phi_cocycle_defect(G, S, T ** 3) == (0, 0)
    d, both = phi_cocycle_defect(G1, S, S)
    assert d == both == -2 * phi_hyp(G1, S)


def test_oracle_examples():
    assert geodesics_coincide(G, G)
    assert intersection_count_oracle(G, G).count is None
    for gamma in (G1, G2):
        res = intersection_count_oracle(gamma, G, 8)
        assert res.count == 4 and res.stable
        assert intersection_count_exact(gamma, G) == 4


@settings(max_examples=25)
@given(primitive_words(3, 2), primitive_words(3, 2))
def test_oracle_agrees_when_stable(gw, sw):
    g, s = word_to_matrix(gw), word_to_matrix(sw)
    exact = intersection_count_exact(g, s)
    if exact is None:
        assert geodesics_coincide(g, s)
        return
    assert -exact == psi_hyp_first(g, s).psi
    res = intersection_count_oracle(g, s, 8)
    assert res.count <= exact
    if res.stable and res.count == exact:
        assert -res.count == psi_hyp_second(gw, sw)[0]
