"""Lubin-Tate formal groups built from a Frobenius polynomial.

Every series attached to the group (the law F, the endomorphisms [a], the
invariant differential) is the unique solution of a commutation equation with
the Frobenius f, solved degree by degree.  At degree n the unknown enters as
(pi - pi^n) * c_n, so each step divides by pi once; the solve therefore runs a
few pi-adic digits above the requested precision and the answer is accepted
only after the commutation equation has been re-checked one digit above the
reported precision, which pins it down uniquely.
"""

from __future__ import annotations

import math

from .base_ring import BaseElem
from .errors import BadFrobenius, PrecisionExhausted
from .series import INF, LaurentSeries, LElem, RationalSeries

DEFAULT_LAW_DEGREE = 20


def _log_floor(q, k):
    """floor(log_q k) for k >= 1, and 0 below."""
    out, t = 0, q
    while t <= k:
        out += 1
        t *= q
    return out


def _guard(q, window):
    return int(math.log(max(window, 2), q)) + 3


# -- bivariate truncated series, stored as {(i, j): raw} ------------------------

def _biv_mul(spec, A, B, D, N):
    """Product of two bivariate series, truncated to total degree <= D."""
    S = 2 * D + 1

    def flat(C):
        out = [spec.zero] * ((D + 1) * S)
        for (i, j), c in C.items():
            out[i * S + j] = c
        return out

    prod = spec.series_mul(flat(A), flat(B), N)
    out = {}
    for idx, c in enumerate(prod):
        if any(c):
            i, j = divmod(idx, S)
            if i + j <= D:
                out[(i, j)] = c
    return out


def _biv_add(spec, A, B, N):
    out = dict(A)
    for k, c in B.items():
        out[k] = spec.add(out.get(k, spec.zero), c, N)
    return {k: c for k, c in out.items() if any(c)}


class FormalGroup:
    """A Lubin-Tate formal o_L-module for a Frobenius polynomial f.

    ``frobenius`` must be an exact series with f = pi*Z + O(Z^2) and
    f = Z^q mod pi.  ``pi_prec`` is the precision of every reported series.
    """

    def __init__(self, spec, frobenius, pi_prec, law_degree=DEFAULT_LAW_DEGREE):
        if not frobenius.exact:
            raise BadFrobenius("the Frobenius must be given as a polynomial")
        self.spec = spec
        self.N = pi_prec
        self.frobenius = frobenius if frobenius.pi_prec == pi_prec else frobenius.with_prec(pi_prec)
        self._frob_raw = frobenius
        self._check_frobenius()
        self.law_degree = law_degree
        self.law = self._solve_law(law_degree)
        self._mult_cache = {}
        self._G_cache = None
        self._weier_cache = {}

    # -- validation ----------------------------------------------------------------

    def _check_frobenius(self):
        spec, f, N = self.spec, self.frobenius, self.N
        if f.z_low < 1:
            raise BadFrobenius("Frobenius must have no constant term")
        if not spec.is_zero(spec.sub(f.coeff(1), spec.pi_raw(N), N), N):
            raise BadFrobenius("Frobenius must be pi*Z modulo degree 2")
        fbar = f.reduce_mod_pi()
        zq = LaurentSeries.residue(spec, [1], spec.q)
        if not (fbar - zq).is_zero():
            raise BadFrobenius("Frobenius must reduce to Z^q modulo pi")

    def _frob_at(self, n):
        f = self._frob_raw
        coeffs = [self.spec.canon(c, n) for c in f.coeffs]
        return LaurentSeries(self.spec, coeffs, f.z_low, None, n)

    def _pi_factor_inv(self, k, n):
        """(pi - pi^k)^(-1) * pi, i.e. the inverse of the unit 1 - pi^(k-1)."""
        spec = self.spec
        u = spec.sub(spec.one, spec.pow(spec.pi_raw(n), k - 1, n), n)
        return spec.inv(u, n)

    # -- the group law -------------------------------------------------------------

    def _solve_law(self, D):
        spec = self.spec
        Nw = self.N + _guard(spec.q, D)
        f = self._frob_at(Nw)
        fc = f.dense(0, f.z_low + len(f.coeffs))
        # powers of f(X) truncated to degree D
        fpow = [[spec.one]]
        for _ in range(D):
            fpow.append(spec.series_mul(fpow[-1], fc, Nw, D + 1))
        F = {(1, 0): spec.one, (0, 1): spec.one}
        for n in range(2, D + 1):
            # f(F) up to degree n, by Horner
            acc = {}
            for c in reversed(fc):
                acc = _biv_mul(spec, acc, F, n, Nw) if acc else {}
                if any(c):
                    acc[(0, 0)] = spec.add(acc.get((0, 0), spec.zero), c, Nw)
            lhs = {k: v for k, v in acc.items() if sum(k) == n}
            # F(f(X), f(Y)) in degree n
            rhs = {}
            for (i, j), c in F.items():
                fi, fj = fpow[i], fpow[j]
                for a in range(i, n - j + 1):
                    b = n - a
                    if a < len(fi) and b < len(fj) and any(fi[a]) and any(fj[b]):
                        t = spec.mul(c, spec.mul(fi[a], fj[b], Nw), Nw)
                        rhs[(a, b)] = spec.add(rhs.get((a, b), spec.zero), t, Nw)
            unit_inv = self._pi_factor_inv(n, Nw)
            for a in range(n + 1):
                k = (a, n - a)
                diff = spec.sub(rhs.get(k, spec.zero), lhs.get(k, spec.zero), Nw)
                if spec.is_zero(diff, Nw):
                    continue
                c = spec.mul(spec.div_pi(diff, Nw), unit_inv, Nw)
                c = spec.canon(c, Nw)
                if any(c):
                    F[k] = c
        law = {k: spec.canon(c, self.N) for k, c in F.items()}
        law = {k: c for k, c in law.items() if any(c)}
        if not self._law_commutes(law, D, self.N):
            raise PrecisionExhausted("group law did not stabilise; raise the guard precision")
        return law

    def _law_commutes(self, law, D, N):
        spec = self.spec
        f = self._frob_at(N)
        fc = f.dense(0, f.z_low + len(f.coeffs))
        acc = {}
        for c in reversed(fc):
            acc = _biv_mul(spec, acc, law, D, N) if acc else {}
            if any(c):
                acc[(0, 0)] = spec.add(acc.get((0, 0), spec.zero), c, N)
        # F(f(X), f(Y)) is a sum of products of a series in X and one in Y
        fpow = [[spec.one]]
        for _ in range(D):
            fpow.append(spec.series_mul(fpow[-1], fc, N, D + 1))
        rows = {}
        for (i, j), c in law.items():
            row = rows.setdefault(i, [spec.zero] * (D + 1))
            for b, x in enumerate(fpow[j]):
                if any(x):
                    row[b] = spec.add(row[b], spec.mul(c, x, N), N)
        rhs = {}
        for i, row in rows.items():
            for a, x in enumerate(fpow[i]):
                if not any(x):
                    continue
                for b in range(D + 1 - a):
                    if any(row[b]):
                        rhs[(a, b)] = spec.add(rhs.get((a, b), spec.zero), spec.mul(x, row[b], N), N)
        diff = _biv_add(spec, acc, {k: spec.neg(c, N) for k, c in rhs.items()}, N)
        return all(spec.is_zero(c, N) for c in diff.values())

    def biv_compose(self, F, A, B, D, N):
        """F(A, B) for bivariate series A, B without constant term, to degree D."""
        spec = self.spec
        apow = [{(0, 0): spec.one}]
        bpow = [{(0, 0): spec.one}]
        maxi = max((i for i, _ in F), default=0)
        maxj = max((j for _, j in F), default=0)
        for _ in range(maxi):
            apow.append(_biv_mul(spec, apow[-1], A, D, N))
        for _ in range(maxj):
            bpow.append(_biv_mul(spec, bpow[-1], B, D, N))
        out = {}
        for (i, j), c in F.items():
            if i + j > D:
                continue
            term = _biv_mul(spec, apow[i], bpow[j], D, N)
            out = _biv_add(spec, out, {k: spec.mul(v, c, N) for k, v in term.items()}, N)
        return out

    def law_coeff(self, i, j):
        return BaseElem(self.spec, self.law.get((i, j), self.spec.zero), self.N)

    def law_json(self):
        return [[i, j, [str(x) for x in c]] for (i, j), c in sorted(self.law.items())]

    # -- endomorphisms ----------------------------------------------------------------

    def _solve_endo(self, a_raw, window, Nw):
        """[a](Z) modulo Z^window, computed at precision Nw."""
        spec = self.spec
        f = self._frob_at(Nw)
        fc = f.dense(0, f.z_low + len(f.coeffs))
        fpow = [[spec.one]]
        for _ in range(window - 1):
            fpow.append(spec.series_mul(fpow[-1], fc, Nw, window))
        A = [spec.zero, spec.canon(a_raw, Nw)] + [spec.zero] * max(0, window - 2)
        A = A[:window]
        for n in range(2, window):
            # degree-n coefficient of f(A) with A known below degree n
            acc = []
            for c in reversed(fc):
                if acc:
                    acc = spec.series_mul(acc, A[:n], Nw, n + 1)
                if any(c):
                    if acc:
                        acc[0] = spec.add(acc[0], c, Nw)
                    else:
                        acc = [c]
            lhs = acc[n] if n < len(acc) else spec.zero
            rhs = spec.zero
            for i in range(1, n):
                if any(A[i]) and n < len(fpow[i]):
                    rhs = spec.add(rhs, spec.mul(A[i], fpow[i][n], Nw), Nw)
            diff = spec.sub(rhs, lhs, Nw)
            if not spec.is_zero(diff, Nw):
                A[n] = spec.mul(spec.div_pi(diff, Nw), self._pi_factor_inv(n, Nw), Nw)
        return A

    def mult(self, a, window):
        """[a](Z) modulo Z^window.

        The coefficient of Z^k depends on a modulo pi^(N + floor(log_q k)),
        so an ``a`` known to fewer digits yields a correspondingly less
        precise series.  Integers are exact.
        """
        spec, N = self.spec, self.N
        loss = _log_floor(spec.q, window - 1)
        if isinstance(a, int):
            a = BaseElem(spec, (a,), N + loss)
        prec = min(N, a.prec - loss)
        if prec < 1:
            raise PrecisionExhausted(
                f"[a] modulo Z^{window} needs a known to {loss + 1} digits, got {a.prec}")
        a_prec = min(a.prec, N + loss)
        key = (spec.canon(a.coords, a_prec), a_prec, window)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        if a.prec >= N + loss and spec.is_zero(spec.sub(a.coords, spec.pi_raw(a_prec), a_prec), a_prec):
            res = self.frobenius.truncate(window)
        else:
            Nw = N + loss + _guard(spec.q, window)
            a_raw = spec.canon(a.coords, a_prec)
            A = self._solve_endo(a_raw, window, Nw)
            res = LaurentSeries(spec, [spec.canon(c, prec) for c in A], 0, window, prec)
            f = self._frob_at(prec + 1)
            chk = LaurentSeries(spec, [spec.canon(c, prec + 1) for c in A], 0, window, prec + 1)
            if not (f.compose(chk) - chk.compose(f)).truncate(window).is_zero():
                raise PrecisionExhausted("[a] did not stabilise; raise the guard precision")
        self._mult_cache[key] = res
        return res

    # -- invariant differential --------------------------------------------------------

    def _solve_G(self, window, Nw):
        """G = dF/dY(Z, 0) solves pi * G(f(Z)) = f'(Z) * G(Z) with G(0) = 1."""
        spec = self.spec
        f = self._frob_at(Nw)
        fc = f.dense(0, f.z_low + len(f.coeffs))
        dfc = [spec.scale_int(c, k + 1, Nw) for k, c in enumerate(fc[1:])]
        fpow = [[spec.one]]
        for _ in range(window - 1):
            fpow.append(spec.series_mul(fpow[-1], fc, Nw, window))
        G = [spec.one] + [spec.zero] * (window - 1)
        pin1 = {}
        for n in range(1, window):
            # (f' G)_n / pi minus the known part of G(f)_n
            s = spec.zero
            for k in range(1, min(n, len(dfc) - 1) + 1):
                if any(dfc[k]) and any(G[n - k]):
                    s = spec.add(s, spec.mul(dfc[k], G[n - k], Nw), Nw)
            s = spec.div_pi(s, Nw) if not spec.is_zero(s, Nw) else spec.zero
            t = spec.zero
            for i in range(1, n):
                if any(G[i]) and n < len(fpow[i]):
                    t = spec.add(t, spec.mul(G[i], fpow[i][n], Nw), Nw)
            rhs = spec.sub(s, t, Nw)
            # (pi^n - 1) G_n = rhs
            if n not in pin1:
                pin1[n] = spec.inv(spec.sub(spec.pow(spec.pi_raw(Nw), n, Nw), spec.one, Nw), Nw)
            G[n] = spec.mul(rhs, pin1[n], Nw)
        return G

    def dlaw_series(self, window):
        """dF/dY at (Z, 0), i.e. 1/g_LT, modulo Z^window."""
        spec, N = self.spec, self.N
        if self._G_cache is not None and self._G_cache.high >= window:
            return self._G_cache.truncate(window)
        Nw = N + _guard(spec.q, window)
        G = self._solve_G(window, Nw)
        res = LaurentSeries(spec, [spec.canon(c, N) for c in G], 0, window, N)
        # certify against the functional equation one digit above N
        f = self._frob_at(N + 1)
        Gc = LaurentSeries(spec, [spec.canon(c, N + 1) for c in G], 0, window, N + 1)
        lhs = Gc.compose(f).mul_pi(1).with_prec(N + 1)
        rhs = f.derivative() * Gc
        if not (lhs - rhs).truncate(window).is_zero():
            raise PrecisionExhausted("dF/dY(Z,0) did not stabilise")
        # where the bivariate law is available it must agree
        D = min(window, self.law_degree)
        from_law = LaurentSeries(spec, [self.law.get((i, 1), spec.zero) for i in range(D)], 0, D, N)
        if not (from_law - res).truncate(D).is_zero():
            raise PrecisionExhausted("invariant differential disagrees with the group law")
        self._G_cache = res
        return res

    def g_lt(self, window):
        """g_LT = (dF/dY(Z, 0))^(-1) modulo Z^window."""
        return self.dlaw_series(window).invert_unit()

    def inv_deriv(self, f, window=None):
        """The invariant derivation g_LT^(-1) * f'.

        ``window`` is required for exact input and caps the result otherwise.
        """
        df = f.derivative()
        if df.is_zero() and df.exact:
            return df
        w = df.high
        if window is not None:
            w = min(w, window)
        if w == INF:
            raise PrecisionExhausted("invariant derivative of an exact series needs a window")
        df = df.truncate(w)
        need = int(w - df.valuation_z()) if df.coeffs else 1
        G = self.dlaw_series(max(need, 1))
        if G.pi_prec > df.pi_prec:
            G = G.with_prec(df.pi_prec)
        return df * G

    # -- logarithm and exponential ---------------------------------------------------

    def log_exp(self, degree, budget=None, pi_prec=None):
        """(log_LT, exp_LT) as rational series through Z^degree."""
        spec = self.spec
        g = self.g_lt(degree)
        if pi_prec is not None and pi_prec < g.pi_prec:
            g = g.with_prec(pi_prec)
        if budget is None:
            budget = spec.e * sum(_vp_fact(k, spec.p) for k in range(1, degree + 1))
        gr = RationalSeries.from_series(g, budget, degree)
        log = gr.integral()
        exp = log.reversion()
        return log, exp

    # -- torsion Weierstrass polynomial ------------------------------------------------

    def torsion_weier(self, window=None, prec=None):
        """Monic P(X) of degree q with [pi](X) - [pi](Z) = P(X) * U(X, Z).

        Returns the list of the q + 1 coefficients of P (series in Z) at
        precision ``prec`` (default: the group precision).  For a monic
        Frobenius of degree q this is [pi](X) - [pi](Z) itself, exactly.
        """
        spec, q = self.spec, self.spec.q
        N = self.N if prec is None else prec
        f = self._frob_at(N)
        deg = f.z_low + len(f.coeffs) - 1
        lead = f.coeff(deg)
        if deg == q and spec.is_zero(spec.sub(lead, spec.one, N), N):
            P = [LaurentSeries(spec, [f.coeff(k)], 0, None, N) for k in range(q + 1)]
            P[0] = -f
            return P
        if window is None:
            raise PrecisionExhausted("a non-monic Frobenius needs an explicit Z-window")
        key = (window, N)
        if key in self._weier_cache:
            return self._weier_cache[key]
        P = _weierstrass(spec, f, q, N, window)
        self._weier_cache[key] = P
        return P


def _vp_fact(k, p):
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def _weierstrass(spec, f, q, N, window):
    """Weierstrass division of X^q by G(X) = f(X) - f(Z) in o_L[[Z]][X].

    G = G_lo + X^q G_hi with G_lo of X-degree < q and coefficients in (pi, Z),
    and G_hi a unit with constant coefficients.  Iterating
    h -> -(h div X^q) * G_hi^(-1) * G_lo collects X^q = Q*G + R; then
    P = X^q - R = Q*G.
    """
    fc = f.dense(0, f.z_low + len(f.coeffs))
    deg = len(fc) - 1
    z = lambda: LaurentSeries.zero(spec, N, window)  # noqa: E731
    const = lambda c: LaurentSeries(spec, [c], 0, window, N)  # noqa: E731
    G_lo = [(-f).truncate(window)] + [const(fc[k]) for k in range(1, q)]
    hi = [fc[k] for k in range(q, deg + 1)]
    # inverse of G_hi as a polynomial in X with constant coefficients, mod pi^N
    from .series import power_series_inverse
    hi_len = (len(hi) - 1) * (N - 1) + 1 if len(hi) > 1 else 1
    hinv = power_series_inverse(spec, hi + [spec.zero] * hi_len, N, hi_len)
    Hinv = [const(c) for c in hinv]

    def pmul(A, B):
        out = [z() for _ in range(len(A) + len(B) - 1)]
        for i, a in enumerate(A):
            if a.is_zero():
                continue
            for j, b in enumerate(B):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return out

    h = [z() for _ in range(q)] + [const(spec.one)]
    R = [z() for _ in range(q)]
    for _ in range(N + window + 2):
        for k in range(q):
            if k < len(h):
                R[k] = R[k] + h[k]
        s = h[q:]
        if all(c.is_zero() for c in s):
            break
        h = [-c for c in pmul(pmul(s, Hinv), G_lo)]
    else:
        raise PrecisionExhausted("Weierstrass division did not converge in the window")
    P = [-r for r in R] + [LaurentSeries(spec, [spec.one], 0, None, N)]
    return P


def build(spec, frobenius, deg=DEFAULT_LAW_DEGREE, pi_prec=None):
    if isinstance(frobenius, (list, tuple)):
        if pi_prec is None:
            raise ValueError("pi_prec is required when the Frobenius is given as a list")
        frobenius = LaurentSeries.from_elems(spec, frobenius, pi_prec)
    if pi_prec is None:
        pi_prec = frobenius.pi_prec
    return FormalGroup(spec, frobenius, pi_prec, deg)


def standard_frobenius(spec, pi_prec, kind="pi"):
    """pi*Z + Z^q, or (1+Z)^p - 1 when o_L = Z_p."""
    if kind == "pi":
        coeffs = [spec.zero, spec.pi_raw(pi_prec)] + [spec.zero] * (spec.q - 2) + [spec.one]
        return LaurentSeries(spec, coeffs, 0, None, pi_prec)
    if kind == "mult":
        if spec.e != 1 or spec.fdeg != 1:
            raise BadFrobenius("(1+Z)^p - 1 is a Frobenius only over Z_p")
        p = spec.p
        return LaurentSeries.from_ints(spec, [0] + [math.comb(p, k) for k in range(1, p + 1)], pi_prec)
    raise ValueError(f"unknown Frobenius kind {kind!r}")


def g_LT(G, window):
    return G.g_lt(window)


def log_exp(G, degree, budget=None):
    return G.log_exp(degree, budget)


def inv_deriv(G, f, window=None):
    return G.inv_deriv(f, window)


def torsion_weier(G, window=None, prec=None):
    return G.torsion_weier(window, prec)
