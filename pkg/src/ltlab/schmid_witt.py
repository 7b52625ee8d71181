"""The residue-side Schmid-Witt pairing.

{f, h} = Res(Phi_(n-1)(f) dlog h) in o_L / pi^n for f in W_n(A_L) and h a
unit; (x, a) = s_n({lift x, lift a}) in W_n(k) for x in W_n(k((Z))) and a a
unit of k((Z)), with Teichmueller coefficient lifts.
"""

from __future__ import annotations

from .base_ring import BaseElem
from .errors import DomainMismatch, NotAUnit, WindowTooSmall
from .residue_omega import DiffForm, dlog, res
from .series import INF, RESIDUE
from .witt import AL, KZ, WittVec, ghost, s_map


class PairingContext:
    """Pairings at Witt length n over a Coleman context."""

    def __init__(self, ctx, n):
        if n > ctx.N:
            raise WindowTooSmall(f"Witt length {n} exceeds the precision {ctx.N}")
        self.ctx = ctx
        self.spec = ctx.spec
        self.n = n

    def lift_vector(self, x):
        """Teichmueller coefficient lifts of the components, at precision n."""
        if x.domain != KZ:
            raise DomainMismatch("the residue pairing takes a vector over k((Z))")
        if x.n != self.n:
            raise DomainMismatch(f"expected a vector of length {self.n}")
        return WittVec(self.spec, AL, [c.lift_from_residue(self.n) for c in x.components])

    def lift_unit(self, a):
        if a.domain != RESIDUE:
            raise DomainMismatch("the residue pairing takes a unit of k((Z))")
        if a.is_zero():
            raise NotAUnit("zero is not a unit")
        return a.lift_from_residue(self.n)

    def brace(self, f, h):
        """Res(Phi_(n-1)(f) dlog h) modulo pi^n."""
        if f.domain != AL:
            raise DomainMismatch("brace takes a Witt vector over A_L")
        n = min(self.n, f.n)
        g = ghost(f)[n - 1]
        g = g.with_prec(min(g.pi_prec, self.n))
        h = h.with_prec(min(h.pi_prec, g.pi_prec))
        vg = g.valuation_z() if g.coeffs else g.high
        if vg == INF:
            return BaseElem(self.spec, self.spec.zero, g.pi_prec)
        # dlog h has no term below Z^-1, so it must be known up to Z^(-vg)
        need = max(0, -int(vg)) + 1
        if not h.exact and h.high < need:
            raise WindowTooSmall(f"the unit must be known below Z^{need}")
        d = dlog(self.ctx, h, need if h.exact else None)
        prod = DiffForm(g * d.coeff, self.ctx)
        if prod.coeff.high <= -1:
            raise WindowTooSmall("the product window does not reach Z^-1")
        return res(prod)

    def residue_pair(self, x, a, x_lift=None, a_lift=None):
        """(x, a) in W_n(k); the lifts may be supplied to test independence."""
        xl = self.lift_vector(x) if x_lift is None else x_lift
        al = self.lift_unit(a) if a_lift is None else a_lift
        value = self.brace(xl, al)
        return s_map(value, self.n)


def brace(pctx, f, h):
    return pctx.brace(f, h)


def residue_pair(pctx, x, a):
    return pctx.residue_pair(x, a)
