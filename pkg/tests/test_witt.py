import itertools

import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec, ResidueElem
from ltlab.coleman import ColemanContext
from ltlab.errors import DomainMismatch
from ltlab.lubin_tate import build, standard_frobenius
from ltlab.series import LaurentSeries
from ltlab.witt import (
    AL, K, KZ, OL, UniversalPolys, WittVec, constant_part, from_ghost, frobenius_w, ghost, in_constants,
    in_minus, in_plus, omega_decompose, s_map, teichmuller_w, vshift, w_map, wp,
)

Z3 = BaseRingSpec(3)
F9 = BaseRingSpec(3, fdeg=2, unram_poly=[1, 0, 1])
Q2E2 = BaseRingSpec(2, e=2, eis_poly=[[2], [2], [1]])
N = 4


def kvec(spec, comps):
    return WittVec(spec, K, [ResidueElem(spec, c) for c in comps])


def k_vectors(spec, n):
    comp = st.lists(st.integers(0, spec.p - 1), min_size=spec.fdeg, max_size=spec.fdeg)
    return st.lists(comp, min_size=n, max_size=n).map(lambda cs: kvec(spec, cs))


def ol_vectors(spec, n, prec=N):
    comp = st.lists(st.integers(0, 10 ** 4), min_size=spec.d, max_size=spec.d)
    return st.lists(comp, min_size=n, max_size=n).map(
        lambda cs: WittVec(spec, OL, [BaseElem(spec, c, prec) for c in cs]))


def kz_vectors(spec, n, lo=-2, terms=3):
    coeff = st.integers(0, spec.p - 1)
    comp = st.lists(coeff, min_size=terms, max_size=terms).map(lambda c: LaurentSeries.residue(spec, c, lo))
    return st.lists(comp, min_size=n, max_size=n).map(lambda cs: WittVec(spec, KZ, cs))


def test_triple_teichmuller_one():
    one = kvec(Z3, [1, 0])
    assert one + one + one == kvec(Z3, [0, 1])


def test_sum_polynomial_closed_form():
    polys = UniversalPolys(Z3, 2)
    for x0, x1, y0, y1 in itertools.product(range(3), repeat=4):
        s = polys.evaluate("add", kvec(Z3, [x0, x1]), kvec(Z3, [y0, y1]))
        assert s.components[1] == ResidueElem(Z3, x1 + y1 - x0 * x0 * y0 - x0 * y0 * y0)
        assert s.components[0] == ResidueElem(Z3, x0 + y0)


@pytest.mark.parametrize("spec", [Z3, F9, Q2E2], ids=["Z3", "F9", "Q2e2"])
def test_universal_polynomials_are_integral(spec):
    polys = UniversalPolys(spec, 3)
    assert all(polys.term_count()[kind] for kind in ("add", "mul", "neg"))


def test_ghost_examples():
    pi = BaseElem.uniformizer(Z3, N)
    x0, x1 = BaseElem(Z3, 5, N), BaseElem(Z3, 7, N)
    assert ghost(WittVec(Z3, OL, [x0, x1])) == [x0, x0 ** 3 + pi * x1]
    b = BaseElem(Z3, 2, N)
    t = teichmuller_w(Z3, OL, b, 3)
    assert ghost(t) == [b, b ** 3, b ** 9]


def test_ghost_needs_torsion_free_domain():
    with pytest.raises(DomainMismatch):
        ghost(kvec(Z3, [1, 0]))


def test_s_map_worked_values():
    assert s_map(BaseElem(Z3, 3, 2), 2) == kvec(Z3, [0, 1])
    C = ColemanContext(build(Z3, standard_frobenius(Z3, 2, "pi"), 12))
    z = LaurentSeries.monomial(Z3, 1, 2, z_high=30)
    zbar = LaurentSeries.residue(Z3, [0, 1])
    out = s_map(z, 2, C)
    assert all((c - zbar).is_zero() for c in out.components)


def test_w_map_worked_value():
    assert w_map(kvec(Z3, [0, 1])) == BaseElem(Z3, 3, 2)


@pytest.mark.parametrize("spec", [Z3, F9], ids=["Z3", "F9"])
def test_s_map_on_teichmuller_values(spec):
    for c in spec.residue_elements():
        t = BaseElem(spec, spec.teichmuller(c, 3), 3)
        assert s_map(t, 3) == WittVec(spec, K, [ResidueElem(spec, c)] + [ResidueElem(spec, 0)] * 2)


def test_omega_decomposition_examples():
    r = lambda coeffs, lo=0: LaurentSeries.residue(Z3, coeffs, lo)  # noqa: E731
    zero = r([])
    const, plus, minus = omega_decompose(WittVec(Z3, KZ, [r([2]), zero]))
    assert const == WittVec(Z3, KZ, [r([2]), zero]) and plus.is_zero() and minus.is_zero()
    const, plus, minus = omega_decompose(WittVec(Z3, KZ, [r([1], 1), zero]))
    assert const.is_zero() and plus == WittVec(Z3, KZ, [r([1], 1), zero]) and minus.is_zero()
    const, plus, minus = omega_decompose(WittVec(Z3, KZ, [r([1], -1), zero]))
    assert const.is_zero() and plus.is_zero() and minus == WittVec(Z3, KZ, [r([1], -1), zero])


@pytest.mark.parametrize("spec", [Z3, Q2E2], ids=["Z3", "Q2e2"])
@given(data=st.data())
def test_ghost_is_a_ring_homomorphism(spec, data):
    x, y = data.draw(ol_vectors(spec, 3)), data.draw(ol_vectors(spec, 3))
    gx, gy = ghost(x), ghost(y)
    assert ghost(x + y) == [a + b for a, b in zip(gx, gy)]
    assert ghost(x * y) == [a * b for a, b in zip(gx, gy)]
    assert from_ghost(spec, OL, gx) == x


@given(k_vectors(F9, 3), k_vectors(F9, 3), k_vectors(F9, 3))
def test_witt_ring_axioms(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x + y) + z == x + (y + z)
    assert x + (-x) == WittVec(F9, K, [ResidueElem(F9, 0)] * 3)


@given(k_vectors(F9, 3), k_vectors(F9, 3))
def test_symbolic_and_pointwise_arithmetic_agree(x, y):
    polys = UniversalPolys(F9, 3)
    assert polys.evaluate("add", x, y) == x + y
    assert polys.evaluate("mul", x, y) == x * y
    assert polys.evaluate("neg", x) == -x


@given(st.lists(st.integers(0, 2), min_size=2, max_size=2), st.lists(st.integers(0, 2), min_size=2, max_size=2))
def test_teichmuller_multiplicative(a, b):
    ra, rb = ResidueElem(F9, a), ResidueElem(F9, b)
    ta, tb = teichmuller_w(F9, K, ra, 3), teichmuller_w(F9, K, rb, 3)
    assert ta * tb == teichmuller_w(F9, K, ra * rb, 3)


@given(kz_vectors(Z3, 2))
def test_shift_commutes_with_artin_schreier(x):
    assert wp(vshift(x)) == vshift(wp(x))


@given(k_vectors(F9, 3))
def test_char_p_frobenius_is_componentwise_power(x):
    assert frobenius_w(x).components == [c ** 9 for c in x.components]


@given(ol_vectors(Z3, 3))
def test_ghost_of_frobenius_and_shift(x):
    pi = BaseElem.uniformizer(Z3, N)
    gx = ghost(x)
    assert ghost(frobenius_w(x)) == gx[1:]
    gv = ghost(vshift(x))
    assert gv[0].is_zero()
    assert gv[1:] == [pi * g for g in gx]


@given(st.lists(st.integers(0, 10 ** 4), min_size=1, max_size=1), st.lists(st.integers(0, 10 ** 4), min_size=1, max_size=1))
def test_s_map_is_a_ring_map_over_integers(a, b):
    x, y = BaseElem(Z3, a, 3), BaseElem(Z3, b, 3)
    assert s_map(x + y, 3) == s_map(x, 3) + s_map(y, 3)
    assert s_map(x * y, 3) == s_map(x, 3) * s_map(y, 3)
    assert w_map(s_map(x, 3)) == x


@given(k_vectors(Z3, 3))
def test_s_after_w_is_identity_over_integers(x):
    assert s_map(w_map(x), 3) == x


@given(kz_vectors(Z3, 3))
def test_omega_decomposition_properties(x):
    const, plus, minus = omega_decompose(x)
    assert const + plus + minus == x
    assert in_constants(const) and in_plus(plus) and in_minus(minus)
    assert constant_part(const).n == x.n


def test_domain_checks():
    with pytest.raises(DomainMismatch):
        WittVec(Z3, "Z", [ResidueElem(Z3, 1)])
    with pytest.raises(DomainMismatch):
        WittVec(Z3, AL, [ResidueElem(Z3, 1)])
    with pytest.raises(DomainMismatch):
        kvec(Z3, [1]) + kvec(Z3, [1, 0])


@given(kz_vectors(F9, 2))
def test_json_round_trip(x):
    assert WittVec.from_json(F9, x.to_json()) == x
