import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec, ResidueElem, teichmuller_lift
from ltlab.coleman import ColemanContext
from ltlab.lubin_tate import build, standard_frobenius
from ltlab.residue_omega import (
    DiffForm, FracClass, change_variable, d_map, dlog, gamma_omega, pairing_bracket, phi_omega,
    psi_omega, res,
)
from ltlab.series import LaurentSeries

N = 3
Z3 = BaseRingSpec(3)


@pytest.fixture(scope="module")
def C():
    return ColemanContext(build(Z3, standard_frobenius(Z3, N, "pi"), 16))


def ints(vals, lo=0, high=None):
    return LaurentSeries.from_ints(Z3, vals, N, lo, high)


def form(C, vals, lo=0, high=None):
    return DiffForm(ints(vals, lo, high), C)


def windowed_forms(C, lo=-3, width=40):
    return st.lists(st.integers(0, 26), min_size=width, max_size=width).map(
        lambda v: form(C, v, lo, lo + width))


Q_OVER_PI = BaseElem(Z3, 3, N + 1).divide_by_pi_exact(1)


def test_residue_of_monomials(C):
    assert res(form(C, [1], -1)) == 1
    for k in (-4, -2, 0, 3):
        assert res(form(C, [1], k)) == 0


def test_exterior_derivative(C):
    assert d_map(C, ints([0, 0, 1])) == form(C, [0, 2])


def test_residue_of_dlog_counts_order(C):
    u = ints([1, 3, 5, 2])
    for k in (-2, 0, 1, 3):
        assert res(dlog(C, u.shift(k), window=10)) == k


def test_dlog_of_teichmuller_constant(C):
    t = teichmuller_lift(ResidueElem(Z3, 2), N)
    assert dlog(C, LaurentSeries(Z3, [t.coords], 0, None, N)).is_zero()


def test_residue_of_frobenius_pullback(C):
    assert res(phi_omega(form(C, [1], -1), window=10)) == Q_OVER_PI


def test_psi_on_invariant_differential(C):
    g = DiffForm(C.group.g_lt(30), C)
    assert psi_omega(g) == g.scale(Q_OVER_PI)


def test_pairing_smallest_case(C):
    cls = pairing_bracket(LaurentSeries.one(Z3, N), form(C, [1], -1), 1)
    assert cls == FracClass(BaseElem(Z3, 1, N), 1)
    assert not cls.is_zero()


@given(data=st.data())
def test_residue_is_invariant_under_variable_change(C, data):
    omega = data.draw(windowed_forms(C))
    h = data.draw(st.lists(st.integers(0, 26), min_size=1, max_size=4))
    # Z = W (1 + pi h(W))
    s = ints([0, 1]) * (LaurentSeries.one(Z3, N) + ints(h).mul_pi(1))
    assert res(change_variable(omega, s)) == res(omega)


@given(data=st.data(), c=st.integers(1, 80).filter(lambda k: k % 3))
def test_residue_is_gamma_invariant(C, data, c):
    omega = data.draw(windowed_forms(C))
    assert res(gamma_omega(BaseElem(Z3, c, N + 4), omega)) == res(omega)


@given(data=st.data())
def test_frobenius_scales_residues(C, data):
    omega = data.draw(windowed_forms(C, lo=-2, width=40))
    assert res(phi_omega(omega)) == res(omega) * Q_OVER_PI


@given(data=st.data(), n=st.integers(1, N))
def test_pairing_adjointness(C, data, n):
    f = ints(data.draw(st.lists(st.integers(0, 26), min_size=30, max_size=30)), -2, 28)
    omega = data.draw(windowed_forms(C, lo=-2, width=40))
    assert pairing_bracket(C.psi_L(f), omega, n) == pairing_bracket(f, phi_omega(omega), n)
    assert pairing_bracket(C.phi(f, 60), omega, n) == pairing_bracket(f, psi_omega(omega), n)


@given(data=st.data())
def test_residue_is_linear(C, data):
    a, b = data.draw(windowed_forms(C)), data.draw(windowed_forms(C))
    assert res(a + b) == res(a) + res(b)


@given(st.lists(st.integers(0, 26), min_size=1, max_size=6), st.integers(-4, 2))
def test_exact_forms_have_no_residue(C, vals, lo):
    assert res(d_map(C, ints(vals, lo))) == 0
