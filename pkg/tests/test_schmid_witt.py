import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec, ResidueElem
from ltlab.coleman import ColemanContext
from ltlab.errors import DomainMismatch, NotAUnit, WindowTooSmall
from ltlab.lubin_tate import build, standard_frobenius
from ltlab.schmid_witt import PairingContext
from ltlab.series import LaurentSeries
from ltlab.witt import AL, K, KZ, WittVec, as_series_vector, constant_part, ghost, omega_decompose, vshift

N = 3
Z3 = BaseRingSpec(3)


@pytest.fixture(scope="module")
def C():
    return ColemanContext(build(Z3, standard_frobenius(Z3, N, "pi"), 12))


def r(coeffs, lo=0):
    return LaurentSeries.residue(Z3, coeffs, lo)


def kz(comps):
    return WittVec(Z3, KZ, comps)


def k(vals):
    return WittVec(Z3, K, [ResidueElem(Z3, v) for v in vals])


def units(lo=(-1, 2)):
    return st.builds(lambda lead, rest, z: r([lead] + rest, z), st.integers(1, 2),
                     st.lists(st.integers(0, 2), max_size=2), st.integers(*lo))


def kz_vectors(n):
    comp = st.builds(lambda cs, lo: r(cs, lo), st.lists(st.integers(0, 2), min_size=1, max_size=4),
                     st.integers(-3, 1))
    return st.lists(comp, min_size=n, max_size=n).map(kz)


ZBAR = r([0, 1])


def test_brace_of_one_against_z(C):
    P = PairingContext(C, N)
    one = WittVec(Z3, AL, [LaurentSeries.one(Z3, N)] + [LaurentSeries.zero(Z3, N)] * (N - 1))
    assert P.brace(one, LaurentSeries.monomial(Z3, 1, N)) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_brace_of_constant_lift_counts_order(C, n):
    P = PairingContext(C, n)
    f = WittVec(Z3, AL, [LaurentSeries.from_ints(Z3, [c], n) for c in (2, 1, 5)[:n]])
    phi_last = ghost(f)[n - 1].coeff_elem(0)
    for order in (-2, 1, 3):
        h = LaurentSeries.from_ints(Z3, [1, 1, 2], n, order)
        assert P.brace(f, h) == phi_last * order


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pairing_worked_values(C, n):
    P = PairingContext(C, n)
    zero = r([])
    for c in (1, 2):
        x = kz([r([c])] + [zero] * (n - 1))
        assert P.residue_pair(x, ZBAR) == k([c] + [0] * (n - 1))
    assert P.residue_pair(kz([ZBAR] + [zero] * (n - 1)), ZBAR).is_zero()


def test_pairing_vanishes_on_teichmuller_of_unit(C):
    a = r([0, 1, 1])  # Z (1 + Z)
    P = PairingContext(C, 2)
    assert P.residue_pair(kz([a, r([])]), a).is_zero()


@given(data=st.data(), n=st.integers(1, N))
def test_brace_is_additive_in_the_unit(C, data, n):
    P = PairingContext(C, n)
    x = data.draw(kz_vectors(n))
    a, b = data.draw(units()), data.draw(units())
    f = P.lift_vector(x)
    ha, hb = P.lift_unit(a), P.lift_unit(b)
    assert P.brace(f, ha * hb) == P.brace(f, ha) + P.brace(f, hb)


@given(data=st.data(), n=st.integers(1, N))
def test_pairing_identities(C, data, n):
    P = PairingContext(C, n)
    x, y = data.draw(kz_vectors(n)), data.draw(kz_vectors(n))
    a, b = data.draw(units()), data.draw(units())
    xa = P.residue_pair(x, a)
    assert P.residue_pair(x + y, a) == xa + P.residue_pair(y, a)
    assert P.residue_pair(x, a * b) == xa + P.residue_pair(x, b)
    assert P.residue_pair(x, ZBAR) == constant_part(omega_decompose(x)[0])
    assert P.residue_pair(as_series_vector(xa), ZBAR) == xa


@given(data=st.data(), n=st.integers(1, N - 1))
def test_pairing_commutes_with_shift(C, data, n):
    x, a = data.draw(kz_vectors(n)), data.draw(units())
    assert PairingContext(C, n + 1).residue_pair(vshift(x), a) == vshift(PairingContext(C, n).residue_pair(x, a))


@given(data=st.data(), n=st.integers(2, N))
def test_pairing_ignores_the_choice_of_lifts(C, data, n):
    P = PairingContext(C, n)
    x, a = data.draw(kz_vectors(n)), data.draw(units())
    noise = st.lists(st.integers(0, 26), min_size=1, max_size=3)
    xl = WittVec(Z3, AL, [c + LaurentSeries.from_ints(Z3, data.draw(noise), n - 1, -2).mul_pi(1)
                          for c in P.lift_vector(x).components])
    al = P.lift_unit(a) * (LaurentSeries.one(Z3, n) + LaurentSeries.from_ints(Z3, data.draw(noise), n - 1).mul_pi(1))
    assert P.residue_pair(x, a, xl, al) == P.residue_pair(x, a)


def test_input_checks(C):
    with pytest.raises(WindowTooSmall):
        PairingContext(C, N + 1)
    P = PairingContext(C, 1)
    with pytest.raises(NotAUnit):
        P.residue_pair(kz([ZBAR]), r([]))
    with pytest.raises(DomainMismatch):
        P.residue_pair(k([1]), ZBAR)
    with pytest.raises(DomainMismatch):
        P.residue_pair(kz([ZBAR, ZBAR]), ZBAR)


def test_brace_value_type(C):
    P = PairingContext(C, 2)
    f = P.lift_vector(kz([r([1], -1), r([2])]))
    assert isinstance(P.brace(f, P.lift_unit(ZBAR)), BaseElem)
