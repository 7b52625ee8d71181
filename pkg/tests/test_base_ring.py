import itertools

import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec, ResidueElem, teichmuller_lift
from ltlab.errors import InvalidSpec, NotDivisible

Z3 = BaseRingSpec(3)
RAM = BaseRingSpec(3, e=2, eis_poly=[[-3], [0], [1]])  # pi^2 = 3
F9 = BaseRingSpec(3, fdeg=2, unram_poly=[1, 0, 1])
Q2E2 = BaseRingSpec(2, e=2, eis_poly=[[2], [2], [1]])
SPECS = [Z3, RAM, F9, Q2E2]
N = 4


def elems(spec, prec=N):
    coords = st.lists(st.integers(0, 10 ** 6), min_size=spec.d, max_size=spec.d)
    return coords.map(lambda c: BaseElem(spec, c, prec))


def residues(spec):
    coords = st.lists(st.integers(0, spec.p - 1), min_size=spec.fdeg, max_size=spec.fdeg)
    return coords.map(lambda c: ResidueElem(spec, c))


def test_add_small_integers():
    assert BaseElem.from_int(Z3, 2, N) + BaseElem.from_int(Z3, 1, N) == BaseElem.from_int(Z3, 3, N)


def test_uniformizer_squares_to_three():
    pi = BaseElem.uniformizer(RAM, N)
    assert pi * pi == BaseElem.from_int(RAM, 3, N)


def test_valuations():
    assert BaseElem.from_int(Z3, 6, N).valuation() == 1
    assert BaseElem.from_int(RAM, 3, N).valuation() == 2
    assert BaseElem.from_int(Z3, 0, N).valuation() == float("inf")


def test_exact_division():
    q = BaseElem.from_int(Z3, 9, N).divide_by_pi_exact(2)
    assert q == BaseElem.from_int(Z3, 1, N) and q.prec == N - 2
    assert BaseElem.from_int(RAM, 3, N).divide_by_pi_exact(2) == BaseElem.from_int(RAM, 1, N)
    with pytest.raises(NotDivisible):
        BaseElem.from_int(Z3, 1, N).divide_by_pi_exact(1)


def test_teichmuller_small_values():
    assert teichmuller_lift(ResidueElem(Z3, 2), N).coords == (80,)
    assert teichmuller_lift(ResidueElem(Z3, 0), N).is_zero()


def test_teichmuller_multiplicative_over_f9():
    els = [ResidueElem(F9, c) for c in itertools.product(range(3), repeat=2)]
    for a, b in itertools.product(els, repeat=2):
        assert teichmuller_lift(a, N) * teichmuller_lift(b, N) == teichmuller_lift(a * b, N)


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
def test_teichmuller_is_a_section(spec):
    for c in spec.residue_elements():
        r = ResidueElem(spec, c)
        t = teichmuller_lift(r, N)
        assert t.reduce_residue() == r
        assert t ** spec.q == t


def test_reduce_three_is_zero():
    assert BaseElem.from_int(Z3, 3, N).reduce_residue().is_zero()


def test_invalid_specs_rejected():
    with pytest.raises(InvalidSpec):
        BaseRingSpec(4)
    with pytest.raises(InvalidSpec):
        BaseRingSpec(3, fdeg=2, unram_poly=[2, 0, 1])  # y^2 + 2 = (y - 1)(y + 1) mod 3
    with pytest.raises(InvalidSpec):
        BaseRingSpec(3, e=2, eis_poly=[[-9], [0], [1]])


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
@given(data=st.data())
def test_ring_axioms(spec, data):
    a, b, c = (data.draw(elems(spec)) for _ in range(3))
    assert a * 0 == BaseElem.from_int(spec, 0, N)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
@given(data=st.data())
def test_reduction_is_a_homomorphism(spec, data):
    a, b = data.draw(elems(spec)), data.draw(elems(spec))
    assert (a + b).reduce_residue() == a.reduce_residue() + b.reduce_residue()
    assert (a * b).reduce_residue() == a.reduce_residue() * b.reduce_residue()


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
@given(data=st.data())
def test_units_invert(spec, data):
    a = data.draw(elems(spec))
    if a.is_unit():
        assert a * a.inverse() == 1
        assert a.valuation() == 0


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
@given(data=st.data(), k=st.integers(0, 3))
def test_pi_power_division_round_trip(spec, data, k):
    a = data.draw(elems(spec))
    pik = BaseElem.uniformizer(spec, N) ** k
    assert (a * pik).divide_by_pi_exact(k) == a
    assert (a * pik).valuation() >= k


@given(residues(F9), residues(F9))
def test_residue_field_is_a_field(a, b):
    if not a.is_zero():
        assert a * a.inverse() == ResidueElem(F9, 1)
    assert (a + b) ** 3 == a ** 3 + b ** 3


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: f"p{s.p}e{s.e}f{s.fdeg}")
def test_config_round_trip(spec):
    assert BaseRingSpec.from_config(spec.to_config()) == spec


@given(elems(Q2E2))
def test_json_round_trip(a):
    assert BaseElem.from_json(Q2E2, a.to_json()) == a
