"""Coleman's operators on the Laurent ring A_L over a Lubin-Tate group.

phi substitutes [pi] = f; the trace operator psi_L is reached through the
basis 1, Z, ..., Z^(q-1) of A_L over phi(A_L) and a table of psi_L(Z^i) built
from power sums of the roots of the torsion polynomial P; the norm operator N
is the phi-preimage of the determinant of multiplication by f(X) on
o_L[[Z]][X]/P(X).

Windows.  A phi-preimage is read off digit by digit: modulo pi, phi(h) is
h(Z^q), so the level-t digits of the components sit in the exponent classes
mod q of the level-t residual.  A digit missed at level s beyond the window
W_i(s) of class i pollutes the level-t residual only from exponent
min(u, W) + q*(W - min(u, W)) + i on, with u = t - s and W = W_i(s); the
residual is trusted below the smallest such bound.
"""

from __future__ import annotations

import math

from .base_ring import BaseElem
from .errors import (
    DomainMismatch,
    NotAUnit,
    NotInImage,
    PrecisionExhausted,
    WindowTooSmall,
)
from .series import EXACT_PREC, INF, RESIDUE, LaurentSeries, LElem


def _cap(h, window):
    return h if window is None else min(h, window)


class ColemanContext:
    """Operator calculus attached to a formal group.

    ``window`` is the Z-window used for the torsion polynomial when the
    Frobenius is not monic of degree q (then P is only known in a window).
    """

    def __init__(self, group, window=None):
        self.group = group
        self.spec = group.spec
        self.N = group.N
        self.q = group.spec.q
        self.window = window
        self.frob = group.frobenius
        self._frob_cache = {}
        self.weier = group.torsion_weier(window)
        sums = self._power_sums(group.torsion_weier(window, self.N + 1))
        self.power_sums = sums
        self.psi_table = [self.phi_preimage(s.div_pi()) for s in sums]
        for i, (s, t) in enumerate(zip(sums, self.psi_table)):
            back = self.phi(t).mul_pi(1)
            if not (back - s).is_zero():
                raise PrecisionExhausted(f"psi table entry {i} fails pi*phi(psi(Z^i)) = p_i")
        sign = 1 if self.q % 2 == 0 else -1
        self.norm_Z = self.phi_preimage(self.weier[0] * sign)
        self._gate_norm()

    # -- helpers ----------------------------------------------------------------

    def _power_sums(self, P):
        """p_0..p_(q-1) of the roots of monic P, by Newton's identities."""
        q = self.q
        n = P[0].pi_prec
        a = [P[q - k] for k in range(q + 1)]  # a_k = coefficient of X^(q-k)
        sums = [LaurentSeries.from_ints(self.spec, [q], n)]
        for k in range(1, q):
            acc = a[k] * (-k)
            for i in range(1, k):
                acc = acc - a[i] * sums[k - i]
            sums.append(acc)
        return sums

    def _gate_norm(self):
        """Check the norm against N([pi]) = Z^q and N(phi(1+Z)) = (1+Z)^q."""
        spec, N = self.spec, self.N
        w = self.window
        f = self.frob if w is None else self.frob.truncate(w)
        zq = LaurentSeries.monomial(spec, self.q, N)
        if not (self.norm_N(f) - zq).is_zero():
            raise PrecisionExhausted("norm operator fails N([pi]) = Z^q")
        one_z = LaurentSeries.from_ints(spec, [1, 1], N)
        g = self.phi(one_z) if w is None else self.phi(one_z).truncate(w)
        if not (self.norm_N(g) - one_z ** self.q).is_zero():
            raise PrecisionExhausted("norm operator fails N(phi(f)) = f^q")

    def frob_at(self, n):
        """The Frobenius polynomial at precision n (its coefficients are exact)."""
        hit = self._frob_cache.get(n)
        if hit is None:
            hit = self.group._frob_at(n)
            self._frob_cache[n] = hit
        return hit

    def _lowest_inverse_exponent(self, n):
        q = self.q
        return -(q + (n - 1) * (q - 1))

    # -- phi and the Gamma-action ----------------------------------------------

    def phi(self, f, window=None):
        """f([pi](Z)); poles are cleared by [pi]^k and divided back."""
        if f.domain == RESIDUE:
            raise DomainMismatch("phi acts on integral series")
        frob = self.frob_at(f.pi_prec)
        if f.is_zero():
            return f if window is None else f.truncate(window)
        v = f.valuation_z()
        if v >= 0:
            return f.compose(frob, window)
        k = -v
        h = f.shift(k)
        ph = h.compose(frob)
        L = self._lowest_inverse_exponent(f.pi_prec)
        target = ph.high + k * L
        if window is not None:
            target = min(target, window)
        if target == INF:
            raise PrecisionExhausted("phi of an exact series with poles needs a window")
        T = int(target) - (k - 1) * L
        if T <= 0:
            return LaurentSeries.zero(self.spec, f.pi_prec, int(target))
        inv = frob.invert_unit(T)
        return (ph * inv ** k).truncate(target)

    def gamma_act(self, c, f, window=None):
        """f([c](Z)) for a unit c of o_L."""
        spec = self.spec
        if isinstance(c, int):
            c = BaseElem(spec, (c,), EXACT_PREC)
        if not c.spec.is_unit(c.coords):
            raise NotAUnit("the Gamma-action needs a unit")
        W = _cap(f.high, window)
        if W == INF:
            if f.is_zero() or (f.z_low == 0 and len(f.coeffs) == 1):
                return f
            raise PrecisionExhausted("the Gamma-action on an exact series needs a window")
        W = int(W)
        lo = f.valuation_z() if f.coeffs else 0
        # [c] must be known in the window shifted by the pole order
        cz = self.group.mult(c, max(W - min(lo, 0) + 1, 2))
        if cz.pi_prec > f.pi_prec:
            cz = cz.with_prec(f.pi_prec)
        return f.compose(cz, W)

    # -- phi-decomposition and preimages ----------------------------------------

    def phi_decompose(self, f, strict=False):
        """(f_0, ..., f_(q-1)) with f = sum_i phi(f_i) Z^i.

        ``strict`` demands f_i = 0 for i > 0 and raises NotInImage otherwise.
        """
        spec, q = self.spec, self.q
        if f.domain == RESIDUE:
            raise DomainMismatch("phi-decomposition acts on integral series")
        if f.coeffs and f.z_low < 0:
            raise DomainMismatch("clear the poles before the phi-decomposition")
        n = f.pi_prec
        m = f.high
        frob = self.frob_at(n)
        acc = [[] for _ in range(q)]
        hist = []
        R = f
        for t in range(n):
            reach = m
            for s, Ws in hist:
                u = t - s
                for i, W in enumerate(Ws):
                    if W == INF:
                        continue
                    a = min(u, W)
                    reach = min(reach, a + q * (W - a) + i)
            Ws = [INF if reach == INF else max(0, -(-(int(reach) - i) // q)) for i in range(q)]
            hist.append((t, Ws))
            if reach != INF:
                R = R.truncate(reach)
            # read level-t digits by exponent class
            top = R.z_low + len(R.coeffs) if R.coeffs else 0
            digits = [dict() for _ in range(q)]
            for k in range(R.z_low if R.coeffs else 0, top):
                c = R.coeffs[k - R.z_low]
                r = spec.residue(c)
                if any(r):
                    j, i = divmod(k, q)
                    if strict and i:
                        raise NotInImage("series is not in the image of phi")
                    digits[i][j] = spec.from_residue(r)
            sub = None
            for i in range(q):
                if not digits[i]:
                    continue
                deg = max(digits[i]) + 1
                d = LaurentSeries(spec, [digits[i].get(j, spec.zero) for j in range(deg)], 0, None, R.pi_prec)
                pd = d.compose(frob.with_prec(R.pi_prec), None if reach == INF else int(reach) - i)
                pd = pd.shift(i)
                sub = pd if sub is None else sub + pd
                for j, c in digits[i].items():
                    while len(acc[i]) <= j:
                        acc[i].append({})
                    acc[i][j][t] = c
            if t == n - 1:
                break
            rem = R if sub is None else R - sub
            R = rem.div_pi()
        out = []
        for i in range(q):
            W = min((Ws[i] for _, Ws in hist), default=INF)
            coeffs = []
            for j, levels in enumerate(acc[i]):
                if W != INF and j >= W:
                    break
                c = spec.zero
                for t, dgt in levels.items():
                    c = spec.add(c, spec.mul(dgt, spec.pow(spec.pi_raw(n), t, n), n), n)
                coeffs.append(c)
            out.append(LaurentSeries(spec, coeffs, 0, None if W == INF else int(W), n))
        return out

    def phi_preimage(self, f):
        """The h with phi(h) = f; NotInImage when there is none."""
        return self.phi_decompose(f, strict=True)[0]

    # -- psi ----------------------------------------------------------------------

    def _pole_cleared(self, f):
        """(k, [pi]^k * f) with the result free of poles."""
        v = f.valuation_z() if f.coeffs else 0
        if v >= 0:
            return 0, f
        k = -v
        frob = self.frob_at(f.pi_prec)
        return k, f * frob ** k

    def psi_L(self, f):
        """psi_L(f) = sum_i f_i psi_L(Z^i) for f = sum_i phi(f_i) Z^i."""
        k, g = self._pole_cleared(f)
        parts = self.phi_decompose(g)
        n = g.pi_prec
        res = None
        for fi, ti in zip(parts, self.psi_table):
            if fi.is_zero() and fi.exact:
                continue
            ti = ti if ti.pi_prec <= n else ti.with_prec(n)
            term = fi * ti
            res = term if res is None else res + term
        if res is None:
            res = LaurentSeries.zero(self.spec, n, None if g.exact else min(p.z_high for p in parts))
        return res.shift(-k)

    def psi_Col(self, f):
        """pi * psi_L(f), reported at the precision of f."""
        r = self.psi_L(f)
        return r.mul_pi(1).with_prec(r.pi_prec)

    # -- norm -------------------------------------------------------------------

    def _mul_x(self, col, P):
        """Multiply sum_j col[j] X^j by X modulo the monic P.

        ``P`` holds the negated low coefficients of P, each None when zero,
        a BaseElem when constant, or a series.
        """
        q = self.q
        lead = col[-1]
        live = not lead.is_zero() or not lead.exact
        out = [None] * q
        for j in range(q):
            prev = col[j - 1] if j else None
            c = P[j]
            if c is None or not live:
                t = None
            elif isinstance(c, BaseElem):
                t = lead.scale(c)
            else:
                t = lead * c
            if prev is None:
                out[j] = t if t is not None else LaurentSeries.zero(self.spec, lead.pi_prec, lead.z_high)
            else:
                out[j] = prev if t is None else prev + t
        return out

    def _neg_weier(self, n):
        """The low coefficients of -P at precision n, in the form _mul_x expects."""
        out = []
        for c in self.weier[: self.q]:
            c = -(c if c.pi_prec <= n else c.with_prec(n))
            if c.is_zero() and c.exact:
                out.append(None)
            elif c.exact and c.z_low == 0 and len(c.coeffs) == 1:
                out.append(BaseElem(self.spec, c.coeffs[0], c.pi_prec))
            else:
                out.append(c)
        return out

    def _norm_matrix(self, g):
        """Matrix of multiplication by g(X) on o_L[[Z]][X]/P in the basis X^j."""
        spec, q = self.spec, self.q
        n = g.pi_prec
        P = self._neg_weier(n)
        m = g.high
        if m == INF:
            W = None
            top = g.z_low + len(g.coeffs)
        else:
            # the unknown tail X^m lies in (pi, Z^q)^(m // q)
            Wv = q * (int(m) // q - n + 1)
            if Wv <= 0:
                raise WindowTooSmall("Z-window too small for the norm operator")
            W = Wv
            top = int(m)
        col = [LaurentSeries.zero(spec, n, W) for _ in range(q)]
        for k in range(top - 1, -1, -1):
            col = self._mul_x(col, P)
            c = g.coeff(k) if k >= g.z_low else spec.zero
            if any(c):
                col[0] = col[0] + LaurentSeries(spec, [c], 0, None, n)
            if W is not None:
                col = [x.truncate(W) for x in col]
        cols = [col]
        for _ in range(q - 1):
            nxt = self._mul_x(cols[-1], P)
            if W is not None:
                nxt = [x.truncate(W) for x in nxt]
            cols.append(nxt)
        return [[cols[j][i] for j in range(q)] for i in range(q)]

    def norm_N(self, f):
        """The norm operator: phi(N(f)) = prod of f over the roots of P."""
        if f.domain == RESIDUE:
            raise DomainMismatch("the norm operator acts on integral series")
        if f.first_unit_exponent() is None:
            raise NotAUnit("not a unit of the Laurent ring")
        v = f.valuation_z()
        g = f.shift(-v)
        M = self._norm_matrix(g)
        if g.exact or not self.spec.is_unit(g.coeff(0)):
            det = _det_berkowitz(M)
        else:
            det = _det_lu(M)
        res = self.phi_preimage(det)
        if v:
            nz = self.norm_Z if self.norm_Z.pi_prec <= res.pi_prec else self.norm_Z.with_prec(res.pi_prec)
            if v > 0:
                res = res * nz ** v
            else:
                inv = nz.invert_unit(None if not nz.exact else _inverse_window(res, -v))
                res = res * inv ** (-v)
        return res

    # -- logarithmic derivative and friends ---------------------------------------

    def delta_LT(self, f, window=None):
        """g_LT^(-1) f'/f; ``window`` is required for exact f with more than one term."""
        if f.first_unit_exponent() is None:
            raise NotAUnit("the logarithmic derivative needs a unit")
        df = f.derivative()
        if df.is_zero():
            W = _cap(df.high, window)
            return LaurentSeries.zero(self.spec, f.pi_prec, None if W == INF else int(W))
        vdf = df.valuation_z()
        if f.exact:
            if window is None:
                raise PrecisionExhausted("logarithmic derivative of an exact series needs a window")
            finv = f.invert_unit(int(window) - vdf)
        else:
            finv = f.invert_unit()
        d = df * finv
        if window is not None:
            d = d.truncate(window)
        if d.high == INF:
            raise PrecisionExhausted("logarithmic derivative needs a finite window")
        need = int(d.high - (d.valuation_z() if d.coeffs else d.high)) + 1
        G = self.group.dlaw_series(max(need, 1))
        if G.pi_prec > d.pi_prec:
            G = G.with_prec(d.pi_prec)
        return (d * G).truncate(d.high)

    def coleman_lift(self, u, n=None, window=None, start=None):
        """The N-fixed unit reducing to the residue series u, modulo pi^n.

        A lift is correct modulo pi and each application of N gains one
        digit, so n - 1 iterations suffice.  ``start`` replaces the
        Teichmueller coefficient lift as the starting point.
        """
        if u.domain != RESIDUE:
            raise DomainMismatch("the Coleman lift takes a residue-field series")
        if u.is_zero():
            raise NotAUnit("zero is not a unit")
        n = self.N if n is None else n
        if start is None:
            g = u.lift_from_residue(n)
        else:
            if not (start.reduce_mod_pi() - u).is_zero():
                raise DomainMismatch("the starting series does not reduce to u")
            g = start.with_prec(n)
        if window is not None:
            g = g.truncate(window)
        if self.window is not None and g.exact:
            raise PrecisionExhausted("with a windowed torsion polynomial the lift needs a window")
        for _ in range(n - 1):
            g = self.norm_N(g)
        return g

    def coates_wiles(self, g, r, r_max=None):
        """(1/r!) (d_inv^(r-1) Delta g)(0) as an element of L."""
        spec = self.spec
        r_max = r if r_max is None else r_max
        if r > r_max:
            from .errors import DenominatorBudgetExceeded
            raise DenominatorBudgetExceeded(f"r = {r} exceeds the declared maximum {r_max}")
        d = self.delta_LT(g, window=r if g.exact else None)
        if d.coeffs and d.z_low < 0:
            raise DomainMismatch("Coates-Wiles values need a unit of o_L[[Z]]; clear the Z-power first")
        for _ in range(r - 1):
            d = self.group.inv_deriv(d)
        if d.high < 1:
            raise WindowTooSmall("Z-window too small for this Coates-Wiles degree")
        c = LElem(spec, d.coeff(0), 0, d.pi_prec)
        return c.div_int(math.factorial(r))

    def nabla(self, g, a, window=None):
        """a * Delta(g)."""
        if isinstance(a, int):
            a = BaseElem(self.spec, (a,), self.N)
        return self.delta_LT(g, window).scale(a)


def _inverse_window(res, k):
    return int(res.high) + 2 * k if res.high != INF else None


def _det_lu(M):
    """Determinant by elimination; every pivot must be a unit power series."""
    A = [row[:] for row in M]
    n = len(A)
    det = None
    for i in range(n):
        piv = A[i][i]
        det = piv if det is None else det * piv
        if i == n - 1:
            break
        inv = piv.invert_unit()
        for r in range(i + 1, n):
            if A[r][i].is_zero():
                continue
            fac = A[r][i] * inv
            for c in range(i + 1, n):
                A[r][c] = A[r][c] - fac * A[i][c]
    return det


def _det_berkowitz(M):
    """Division-free determinant (Berkowitz)."""
    n = len(M)
    one = M[0][0] * 0 + 1

    def dot(R, v):
        acc = None
        for a, b in zip(R, v):
            t = a * b
            acc = t if acc is None else acc + t
        return acc

    vect = [one, -M[0][0]]
    for r in range(1, n):
        R = M[r][:r]
        C = [M[i][r] for i in range(r)]
        sub = [row[:r] for row in M[:r]]
        col = [one, -M[r][r]]
        v = C
        for _ in range(r):
            col.append(-dot(R, v))
            v = [dot(row, v) for row in sub]
        new = []
        for i in range(r + 2):
            acc = None
            for j in range(len(vect)):
                if 0 <= i - j < len(col):
                    t = col[i - j] * vect[j]
                    acc = t if acc is None else acc + t
            new.append(acc)
        vect = new
    return vect[n] if n % 2 == 0 else -vect[n]


# -- functional interface ------------------------------------------------------

def build_context(group, window=None):
    return ColemanContext(group, window)


def phi(ctx, f, window=None):
    return ctx.phi(f, window)


def gamma_act(ctx, c, f, window=None):
    return ctx.gamma_act(c, f, window)


def phi_decompose(ctx, f):
    return ctx.phi_decompose(f)


def psi_L(ctx, f):
    return ctx.psi_L(f)


def psi_Col(ctx, f):
    return ctx.psi_Col(f)


def norm_N(ctx, f):
    return ctx.norm_N(f)


def delta_LT(ctx, f, window=None):
    return ctx.delta_LT(f, window)


def coleman_lift(ctx, u, n=None, window=None, start=None):
    return ctx.coleman_lift(u, n, window, start)


def coates_wiles(ctx, g, r, r_max=None):
    return ctx.coates_wiles(g, r, r_max)


def nabla(ctx, g, a, window=None):
    return ctx.nabla(g, a, window)
