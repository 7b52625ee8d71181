import pytest
from hypothesis import given, strategies as st

from ltlab.base_ring import BaseElem, BaseRingSpec, ResidueElem, teichmuller_lift
from ltlab.coleman import ColemanContext
from ltlab.errors import DomainMismatch
from ltlab.lubin_tate import build, standard_frobenius
from ltlab.series import LaurentSeries, LElem

N = 3
Z3 = BaseRingSpec(3)
Q9 = BaseRingSpec(3, fdeg=2, unram_poly=[1, 0, 1])


@pytest.fixture(scope="module")
def gm():
    return ColemanContext(build(Z3, standard_frobenius(Z3, N, "mult"), 16))


@pytest.fixture(scope="module")
def lt():
    return ColemanContext(build(Z3, standard_frobenius(Z3, N, "pi"), 16))


@pytest.fixture(scope="module")
def lt9():
    return ColemanContext(build(Q9, standard_frobenius(Q9, N, "pi"), 16))


def ints(vals, lo=0, high=None, spec=Z3):
    return LaurentSeries.from_ints(spec, vals, N, lo, high)


def coeff_lists(min_size=1, max_size=6):
    return st.lists(st.integers(0, 26), min_size=min_size, max_size=max_size)


Zs = LaurentSeries.monomial(Z3, 1, N)
ONE_PLUS_Z = ints([1, 1])


def test_phi_basic_values(lt):
    assert lt.phi(Zs) == lt.frob
    assert lt.phi(ints([5])) == ints([5])
    inv = lt.phi(ints([1], lo=-1), 30)
    assert inv == lt.frob.invert_unit(high=30)


def test_gamma_action(gm):
    f = ints([4, 1, 0, 2])
    assert gm.gamma_act(BaseElem(Z3, 1, N + 4), f, 12) == f.truncate(12)
    for c in (2, 4, 7):
        assert gm.gamma_act(BaseElem(Z3, c, N + 4), ONE_PLUS_Z, 12) == (ONE_PLUS_Z ** c).truncate(12)


UNITS = st.integers(1, 80).filter(lambda k: k % 3)


@given(a=UNITS, b=UNITS, vals=coeff_lists())
def test_gamma_action_composes(lt, a, b, vals):
    f = ints(vals)
    ca, cb = BaseElem(Z3, a, N + 4), BaseElem(Z3, b, N + 4)
    lhs = lt.gamma_act(ca, lt.gamma_act(cb, f, 12), 12)
    assert lhs == lt.gamma_act(ca * cb, f, 12)


def test_decomposition_of_low_monomials_mod_pi(lt9):
    for i in range(lt9.q):
        f = LaurentSeries.monomial(Q9, i, 1, z_high=40)
        parts = lt9.phi_decompose(f)
        assert [p.is_zero() for p in parts] == [k != i for k in range(lt9.q)]
        assert parts[i] == LaurentSeries.one(Q9, 1)


@pytest.mark.parametrize("ctx", ["lt", "gm", "lt9"])
def test_decomposition_reassembles(ctx, request):
    C = request.getfixturevalue(ctx)
    S = C.spec
    # each component keeps about width/q terms, so scale the width with q
    width = 12 * C.q
    f = LaurentSeries(S, [S.from_int(k * k + 1, N) for k in range(width)], 0, width, N)
    parts = C.phi_decompose(f)
    z = LaurentSeries.monomial(S, 1, N)
    back = sum((C.phi(p) * z ** i for i, p in enumerate(parts)), LaurentSeries.zero(S, N))
    assert (back - f).is_zero() and (back - f).high >= 8


@given(vals=coeff_lists(max_size=8))
def test_psi_after_phi(lt, vals):
    f = ints(vals, lo=-1)
    qp = BaseElem(Z3, 3, N + 1).divide_by_pi_exact(1)
    assert lt.psi_L(lt.phi(f, 60)) == f.scale(qp)
    assert lt.psi_Col(lt.phi(f, 60)) == f.scale(BaseElem(Z3, 3, N))


@given(vals=coeff_lists(max_size=8))
def test_psi_col_pulls_out_frobenius(lt, vals):
    f = LaurentSeries(Z3, [Z3.from_int(v, N) for v in vals] + [Z3.zero] * 40, -1, 45, N)
    assert lt.psi_Col(lt.frob * f) == lt.psi_Col(f).shift(1)


def test_norm_values(gm, lt):
    assert gm.norm_N(ONE_PLUS_Z) == ONE_PLUS_Z
    assert gm.norm_N(Zs) == Zs
    assert lt.norm_N(lt.frob) == Zs ** 3


@given(vals=coeff_lists(max_size=4))
def test_norm_of_phi_is_power(lt, vals):
    f = ints([1] + vals)
    assert lt.norm_N(lt.phi(f)) == f ** 3


def test_delta_values(gm):
    assert gm.delta_LT(ints([2]), 10).is_zero()
    assert gm.delta_LT(ONE_PLUS_Z, 10) == ints([1], high=10)


@given(u=coeff_lists(max_size=4), v=coeff_lists(max_size=4))
def test_delta_is_logarithmic(lt, u, v):
    f, g = ints([1] + u), ints([1] + v)
    assert lt.delta_LT(f * g, 12) == lt.delta_LT(f, 12) + lt.delta_LT(g, 12)


def test_coleman_lift_values(gm, lt9):
    zbar = LaurentSeries.residue(Z3, [0, 1])
    assert gm.coleman_lift(zbar) == Zs
    for c in Q9.residue_elements():
        if any(c):
            lifted = lt9.coleman_lift(LaurentSeries.residue(Q9, [c]))
            assert lifted == LaurentSeries(Q9, [teichmuller_lift(ResidueElem(Q9, c), N).coords], 0, None, N)


@given(u=st.lists(st.integers(0, 2), min_size=2, max_size=3), v=st.lists(st.integers(0, 2), min_size=2, max_size=3))
def test_coleman_lift_is_multiplicative(lt, u, v):
    ubar = LaurentSeries.residue(Z3, [1] + u, -1)
    vbar = LaurentSeries.residue(Z3, [2] + v)
    lifted = lt.coleman_lift(ubar * vbar)
    assert lifted == lt.coleman_lift(ubar) * lt.coleman_lift(vbar)
    assert lt.norm_N(lifted) == lifted
    assert lifted.reduce_mod_pi() == ubar * vbar


def test_coates_wiles_on_the_multiplicative_group(gm):
    def cw(g, r):
        return gm.coates_wiles(g, r, 5)
    assert cw(ONE_PLUS_Z, 1).equals(LElem.from_int(Z3, 1, N))
    assert cw(ONE_PLUS_Z, 2).is_zero() and cw(ONE_PLUS_Z, 3).is_zero()
    for a in (2, 5, 7):
        assert cw(ONE_PLUS_Z ** a, 1).equals(LElem.from_int(Z3, a, N))
    assert all(cw(ints([4]), r).is_zero() for r in (1, 2, 3))


def test_coates_wiles_rejects_poles(gm):
    with pytest.raises(DomainMismatch):
        gm.coates_wiles(ints([1, 1], lo=-1), 1)


def test_nabla_values(gm):
    assert gm.nabla(ONE_PLUS_Z, 1, 10) == ints([1], high=10)
    assert gm.nabla(ONE_PLUS_Z, 0, 10).is_zero()


def test_nabla_is_psi_invariant(lt):
    for ub in ([1, 1], [2, 0, 1], [1, 2, 2]):
        g = lt.coleman_lift(LaurentSeries.residue(Z3, ub))
        v = lt.nabla(g, 1, 60)
        assert lt.psi_L(v) == v
