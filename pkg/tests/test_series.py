import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseRingSpec
from ltlab.errors import IllegalSubstituend
from ltlab.series import RESIDUE, LaurentSeries

Z3 = BaseRingSpec(3)
F9 = BaseRingSpec(3, fdeg=2, unram_poly=[1, 0, 1])
Q2E2 = BaseRingSpec(2, e=2, eis_poly=[[2], [2], [1]])
N = 3


def ser(ints, lo=0, high=None, spec=Z3, n=N):
    return LaurentSeries.from_ints(spec, ints, n, lo, high)


def Z(spec=Z3, n=N):
    return LaurentSeries.monomial(spec, 1, n)


def windowed(spec, lo_range=(-3, 3), width=25):
    coord = st.lists(st.integers(0, 200), min_size=spec.d, max_size=spec.d).map(tuple)
    return st.builds(
        lambda cs, lo: LaurentSeries(spec, cs, lo, lo + width, N),
        st.lists(coord, min_size=width, max_size=width), st.integers(*lo_range))


def polys(spec, lo_range=(-3, 3), max_terms=6):
    coord = st.lists(st.integers(0, 200), min_size=spec.d, max_size=spec.d).map(tuple)
    return st.builds(lambda cs, lo: LaurentSeries(spec, cs, lo, None, N),
                     st.lists(coord, min_size=1, max_size=max_terms), st.integers(*lo_range))


def test_small_products():
    assert ser([1, 1]) * ser([1, -1]) == ser([1, 0, -1])
    assert ser([1], lo=-1) * Z() == LaurentSeries.one(Z3, N)


def test_geometric_series():
    inv = ser([1, -1]).invert_unit(high=10)
    assert inv == ser([1] * 10, high=10)
    assert inv.z_high == 10


def test_invert_monomial():
    assert Z().invert_unit(high=5) == ser([1], lo=-1)


def test_pi_series_is_invertible_in_laurent_ring():
    pi_z = ser([0, 3, 0, 1])  # 3Z + Z^3
    inv = pi_z.invert_unit(high=20)
    prod = pi_z * inv
    assert prod == LaurentSeries.one(Z3, N)
    assert prod.high >= 15


def test_composition_examples():
    z = Z()
    assert (z * z).compose(z + z * z, high=12) == ser([0, 0, 1, 2, 1], high=12)
    f = ser([1, 4, 2, 7])
    assert f.compose(z, high=10) == f


def test_compose_rejects_order_zero():
    with pytest.raises(IllegalSubstituend):
        ser([1, 1]).compose(ser([1, 1]), high=5)


def test_derivative_examples():
    assert ser([0, 0, 0, 1]).derivative() == ser([0, 0, 3])
    assert ser([1], lo=-1).derivative() == ser([-1], lo=-2)


def test_reduction_examples():
    assert ser([3, 1]).reduce_mod_pi() == LaurentSeries.residue(Z3, [0, 1])
    assert ser([0, 3, 0, 1]).reduce_mod_pi() == LaurentSeries.residue(Z3, [0, 0, 0, 1])


def test_lift_examples():
    z = LaurentSeries.residue(Z3, [0, 1])
    assert z.lift_from_residue(N) == Z()
    c = LaurentSeries.residue(Z3, [2])
    assert c.lift_from_residue(N) == ser([26])  # Teichmueller lift of 2 mod 27 is -1


@pytest.mark.parametrize("spec", [Z3, F9, Q2E2], ids=["Z3", "F9", "Q2e2"])
@given(data=st.data())
def test_multiplication_associative_and_commutative(spec, data):
    a, b, c = (data.draw(windowed(spec)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(polys(Z3), polys(Z3))
def test_leibniz_rule(f, g):
    assert (f * g).derivative() == f * g.derivative() + g * f.derivative()


@pytest.mark.parametrize("spec", [Z3, F9], ids=["Z3", "F9"])
@given(data=st.data())
def test_reduction_is_a_ring_map(spec, data):
    f, g = data.draw(polys(spec)), data.draw(polys(spec))
    assert (f * g).reduce_mod_pi() == f.reduce_mod_pi() * g.reduce_mod_pi()
    assert (f + g).reduce_mod_pi() == f.reduce_mod_pi() + g.reduce_mod_pi()


@given(polys(F9))
def test_lift_is_a_section(f):
    fbar = f.reduce_mod_pi()
    assert fbar.lift_from_residue(N).reduce_mod_pi() == fbar
    assert fbar.domain == RESIDUE


@given(windowed(Q2E2, lo_range=(0, 1)))
def test_unit_inverse(f):
    if Q2E2.is_unit(f.coeff(0)):
        assert f * f.invert_unit() == LaurentSeries.one(Q2E2, N)


@given(polys(Z3))
def test_compose_is_a_ring_map(f):
    g = ser([0, 1, 1])
    lhs = (f * f).compose(g, high=12)
    rhs = f.compose(g, high=12) * f.compose(g, high=12)
    assert lhs == rhs


@given(windowed(F9))
def test_json_round_trip(f):
    assert LaurentSeries.from_json(F9, f.to_json()) == f
