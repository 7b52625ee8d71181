"""Differential forms f dZ over the Laurent ring, residues and the pairing.

psi on forms goes through the twist coordinate: every form is h * g_LT dZ
with h = f / g_LT, and psi acts on h alone.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_ring import BaseElem
from .errors import NotAUnit, PrecisionExhausted, WindowTooSmall
from .series import EXACT_PREC, INF, LaurentSeries


class DiffForm:
    """The form ``coeff * dZ`` over a Coleman context."""

    __slots__ = ("coeff", "ctx")

    def __init__(self, coeff, ctx):
        self.coeff = coeff
        self.ctx = ctx

    def __add__(self, other):
        return DiffForm(self.coeff + other.coeff, self.ctx)

    def __sub__(self, other):
        return DiffForm(self.coeff - other.coeff, self.ctx)

    def __neg__(self):
        return DiffForm(-self.coeff, self.ctx)

    def scale(self, c):
        return DiffForm(self.coeff * c, self.ctx)

    def times(self, f):
        """f * omega for a series f."""
        return DiffForm(self.coeff * f, self.ctx)

    def is_zero(self):
        return self.coeff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.coeff == other.coeff

    __hash__ = None

    def __repr__(self):
        return f"DiffForm({self.coeff!r} dZ)"

    def to_json(self):
        return {"coeff": self.coeff.to_json(), "basis": "dZ"}

    @classmethod
    def from_json(cls, ctx, doc):
        return cls(LaurentSeries.from_json(ctx.spec, doc["coeff"]), ctx)


def res(omega):
    """The coefficient of Z^-1 dZ."""
    f = omega.coeff
    if f.high <= -1:
        raise WindowTooSmall("the window does not reach Z^-1")
    return BaseElem(f.spec, f.coeff(-1), f.pi_prec)


def d_map(ctx, f):
    return DiffForm(f.derivative(), ctx)


def dlog(ctx, f, window=None):
    """df / f; ``window`` is required for exact f with more than one term."""
    if f.first_unit_exponent() is None:
        raise NotAUnit("dlog needs a unit")
    df = f.derivative()
    if df.is_zero():
        return DiffForm(df if window is None else df.truncate(window), ctx)
    if f.exact:
        if window is None:
            raise PrecisionExhausted("dlog of an exact series needs a window")
        finv = f.invert_unit(int(window) - df.valuation_z())
    else:
        finv = f.invert_unit()
    out = df * finv
    return DiffForm(out if window is None else out.truncate(window), ctx)


def _dfrob_over_pi(ctx, n):
    """pi^-1 [pi]'(Z), exact, at precision n."""
    f = ctx.group._frob_at(n + 1)
    return f.derivative().div_pi()


def phi_omega(omega, window=None):
    """phi(f) * pi^-1 [pi]' dZ; ``window`` is required for exact forms with poles."""
    ctx = omega.ctx
    f = omega.coeff
    out = ctx.phi(f, window) * _dfrob_over_pi(ctx, f.pi_prec)
    return DiffForm(out if window is None else out.truncate(window), ctx)


def _g_lt_like(ctx, window, n):
    G = ctx.group.g_lt(max(int(window), 1))
    return G if G.pi_prec <= n else G.with_prec(n)


def _dlaw_like(ctx, window, n):
    G = ctx.group.dlaw_series(max(int(window), 1))
    return G if G.pi_prec <= n else G.with_prec(n)


def twist_coordinate(omega):
    """h with omega = h * g_LT dZ."""
    f = omega.coeff
    if f.high == INF:
        raise PrecisionExhausted("the twist coordinate of an exact form needs a window")
    v = f.valuation_z() if f.coeffs else f.high
    return f * _dlaw_like(omega.ctx, f.high - v, f.pi_prec)


def from_twist(ctx, h):
    """The form h * g_LT dZ."""
    if h.high == INF:
        raise PrecisionExhausted("an exact twist coordinate needs a window")
    v = h.valuation_z() if h.coeffs else h.high
    return DiffForm(h * _g_lt_like(ctx, h.high - v, h.pi_prec), ctx)


def psi_omega(omega):
    """psi_L(h) * g_LT dZ for omega = h * g_LT dZ."""
    ctx = omega.ctx
    return from_twist(ctx, ctx.psi_L(twist_coordinate(omega)))


def phi_omega_twist(omega):
    """phi(h) * g_LT dZ for omega = h * g_LT dZ."""
    ctx = omega.ctx
    return from_twist(ctx, ctx.phi(twist_coordinate(omega)))


def gamma_omega(c, omega, window=None):
    """gamma_act(c, f) * [c]' dZ."""
    ctx = omega.ctx
    if isinstance(c, int):
        c = BaseElem(ctx.spec, (c,), EXACT_PREC)
    gf = ctx.gamma_act(c, omega.coeff, window)
    if gf.high == INF:
        if gf.is_zero():
            return DiffForm(gf, ctx)
        raise PrecisionExhausted("the Gamma-action on an exact form needs a window")
    v = gf.valuation_z() if gf.coeffs else gf.high
    need = int(gf.high - v) + 1
    dc = ctx.group.mult(c, max(need, 2)).derivative()
    if dc.pi_prec > gf.pi_prec:
        dc = dc.with_prec(gf.pi_prec)
    return DiffForm(gf * dc, ctx)


def change_variable(omega, s):
    """Rewrite omega = F(Z) dZ in a new variable W with Z = s(W): F(s) s' dW."""
    f = omega.coeff
    return DiffForm(f.compose(s) * s.derivative(), omega.ctx)


@dataclass(frozen=True)
class FracClass:
    """The class of numerator / pi^n in L / o_L."""

    numerator: BaseElem
    n: int

    def __eq__(self, other):
        if not isinstance(other, FracClass):
            return NotImplemented
        spec = self.numerator.spec
        a, b = self.numerator, other.numerator
        # bring both to the common denominator pi^max(n)
        k = max(self.n, other.n)
        pa = spec.mul(a.coords, spec.pow(spec.pi_raw(k), k - self.n, k), k)
        pb = spec.mul(b.coords, spec.pow(spec.pi_raw(k), k - other.n, k), k)
        prec = min(a.prec + k - self.n, b.prec + k - other.n, k)
        return spec.is_zero(spec.sub(pa, pb, prec), prec)

    __hash__ = None

    def is_zero(self):
        spec = self.numerator.spec
        prec = min(self.numerator.prec, self.n)
        return spec.is_zero(self.numerator.coords, prec)

    def to_json(self):
        spec = self.numerator.spec
        return {"numerator": [str(x) for x in spec.canon(self.numerator.coords, self.n)],
                "den_pi_power": self.n}


def pairing_bracket(f, omega, n):
    """pi^-n Res(f * omega) modulo o_L."""
    if f.pi_prec < n or omega.coeff.pi_prec < n:
        raise PrecisionExhausted(f"pairing at level {n} needs precision {n}")
    r = res(DiffForm(f.with_prec(n) * omega.coeff.with_prec(n), omega.ctx))
    return FracClass(r, n)
