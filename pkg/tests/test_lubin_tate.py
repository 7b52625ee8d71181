import math

import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec
from ltlab.errors import BadFrobenius
from ltlab.lubin_tate import build, standard_frobenius
from ltlab.series import LaurentSeries, LElem, RationalSeries

N = 3
DEG = 12
Z3 = BaseRingSpec(3)
Q2E2 = BaseRingSpec(2, e=2, eis_poly=[[2], [2], [1]])
Q9 = BaseRingSpec(3, fdeg=2, unram_poly=[1, 0, 1])


@pytest.fixture(scope="module")
def gm():
    return build(Z3, standard_frobenius(Z3, N, "mult"), DEG)


@pytest.fixture(scope="module")
def groups():
    return {name: build(S, standard_frobenius(S, N, "pi"), DEG)
            for name, S in [("Z3", Z3), ("Q2e2", Q2E2), ("Q9", Q9)]}


def ints(vals, high=None):
    return LaurentSeries.from_ints(Z3, vals, N, 0, high)


def binom_series(a, W):
    """(1+Z)^a - 1 modulo Z^W by the binomial theorem."""
    def coeff(k):
        num = 1
        for t in range(k):
            num *= a - t
        return num // math.factorial(k)
    return ints([0] + [coeff(k) for k in range(1, W)], W)


def test_gm_law_closed_form(gm):
    expected = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    for k, c in gm.law.items():
        assert Z3.is_zero(Z3.sub(c, Z3.from_int(expected.get(k, 0), N), N), N), k
    assert set(expected) <= set(gm.law)


@pytest.mark.parametrize("a", [-7, -1, 0, 2, 5, 13])
def test_gm_multiplication_closed_form(gm, a):
    assert gm.mult(a, DEG + 1) == binom_series(a, DEG + 1)


def test_gm_invariant_differential(gm):
    assert gm.g_lt(DEG) == ints([(-1) ** k for k in range(DEG)], DEG)


def test_gm_logarithm(gm):
    log, _ = gm.log_exp(8)
    for k in range(1, 9):
        assert log.coeffs[k].equals(LElem.from_int(Z3, (-1) ** (k + 1), N).div_int(k)), k


def test_gm_invariant_derivation(gm):
    z = LaurentSeries.monomial(Z3, 1, N)
    assert gm.inv_deriv(z, window=DEG) == ints([1, 1], DEG)
    assert gm.inv_deriv(LaurentSeries.one(Z3, N)).is_zero()
    f = ints([2, 1, 4, 0, 5])
    assert gm.inv_deriv(f, window=DEG) == (f.derivative() * ints([1, 1])).truncate(DEG)


def test_gm_torsion_polynomial(gm):
    P = gm.torsion_weier()
    z = LaurentSeries.monomial(Z3, 1, N)
    assert P[0] == -((z + 1) ** 3 - 1)
    assert all(P[k] == ints([math.comb(3, k)]) for k in range(1, 4))


@pytest.mark.parametrize("name", ["Z3", "Q2e2", "Q9"])
def test_normalizations(groups, name):
    G = groups[name]
    S = G.spec
    z = LaurentSeries.monomial(S, 1, N)
    assert G.mult(1, DEG) == z.truncate(DEG)
    assert G.law.get((1, 0)) == S.canon(S.one, N) and G.law.get((0, 1)) == S.canon(S.one, N)
    assert all(i + j >= 2 or (i, j) in ((1, 0), (0, 1)) for (i, j) in G.law)
    g = G.g_lt(DEG)
    assert BaseElem(S, g.coeff(0), N) == 1


def test_pi_torsion_polynomial_is_frobenius_difference(groups):
    G = groups["Z3"]
    P = G.torsion_weier()
    assert P[0] == -ints([0, 3, 0, 1])
    assert P[1] == ints([3]) and P[2].is_zero() and P[3] == ints([1])


@pytest.mark.parametrize("name", ["Z3", "Q2e2", "Q9"])
def test_torsion_polynomial_reduces_to_power_of_difference(groups, name):
    G = groups[name]
    S, q = G.spec, G.spec.q
    P = G.torsion_weier(window=DEG)
    for k in range(q + 1):
        expected = LaurentSeries.residue(S, [(-1) ** (q - k) * math.comb(q, k) % S.p], q - k)
        assert P[k].reduce_mod_pi().truncate(DEG) == expected.truncate(DEG), k


@pytest.mark.parametrize("name", ["Z3", "Q2e2", "Q9"])
def test_log_exp_inverse(groups, name):
    G = groups[name]
    log, exp = G.log_exp(10)
    z = RationalSeries.from_series(LaurentSeries.monomial(G.spec, 1, N), log.budget, 11)
    assert exp.compose(log).equals(z, 11)


@pytest.mark.parametrize("name", ["Z3", "Q9"])
@given(a=st.integers(1, 500), b=st.integers(1, 500))
def test_endomorphisms_compose(groups, name, a, b):
    G = groups[name]
    W = 10
    assert G.mult(a, W).compose(G.mult(b, W)) == G.mult(a * b, W)


@given(a=st.integers(1, 80), b=st.integers(1, 80), coeffs=st.lists(st.integers(0, 26), min_size=1, max_size=5))
def test_composition_with_endomorphisms(groups, a, b, coeffs):
    G = groups["Z3"]
    W = 9
    f = ints(coeffs)
    lhs = f.compose(G.mult(a, W), high=W).compose(G.mult(b, W), high=W)
    assert lhs == f.compose(G.mult(a * b, W), high=W)


def test_log_scales_under_multiplication(groups):
    G = groups["Z3"]
    log, _ = G.log_exp(8)
    for a in (BaseElem(Z3, 2, N + 8), BaseElem.uniformizer(Z3, N + 8), BaseElem.uniformizer(Z3, N + 8) + 1):
        A = RationalSeries.from_series(G.mult(a, 9), log.budget, 9)
        scalar = RationalSeries.from_series(LaurentSeries(Z3, [a.coords], 0, None, N), log.budget, 9)
        assert log.compose(A).equals(log * scalar, 9)


def test_bad_frobenius_rejected():
    with pytest.raises(BadFrobenius):
        build(Z3, ints([0, 3, 1]), DEG)  # not Z^3 modulo 3
    with pytest.raises(BadFrobenius):
        build(Z3, ints([0, 6, 0, 1]), DEG)  # linear term is not pi
    with pytest.raises(BadFrobenius):
        standard_frobenius(Q9, N, "mult")
