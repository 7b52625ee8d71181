"""Truncated Laurent series over o_L / pi^N and over the residue field.

A ``LaurentSeries`` stands for an element of the pi-adic completion of
o_L[[Z]][1/Z] known modulo pi^N A + Z^m o_L[[Z]]: every coefficient is known
modulo pi^N and nothing is known at exponents >= m.  ``z_high = None`` marks
an exact series (a Laurent polynomial with nothing missing on the right).

Window rules, with v(f) the lowest exponent carrying a nonzero coefficient:

* sum: the smaller of the two windows;
* product: min(m_f + v(g), m_g + v(f));
* composition f(g), with g of Z-order r and with first unit coefficient at
  exponent r0: the unknown tail Z^m of f becomes g^m, whose pi^t-part starts
  at r*t + r0*(m - t), so only t < N matters.  An uncertainty Z^h in g moves
  f(g) by Z^(h + r*(v(f) - 1)).  The result window is the smaller bound.

Residue-field series use the same code with N = 1; their coefficients are raw
tuples whose ramified slots are zero.
"""

from __future__ import annotations

import math

from .base_ring import BaseElem, ResidueElem
from .errors import (
    DenominatorBudgetExceeded,
    DomainMismatch,
    IllegalSubstituend,
    NotAUnit,
    NotDivisible,
    PrecisionExhausted,
    SpecMismatch,
    WindowTooSmall,
)

INF = math.inf
# pi-adic precision given to exact constants inside rational series
EXACT_PREC = 256
INTEGRAL = "integral"
RESIDUE = "residue"


def _hi(h):
    return INF if h is None else h


def _from_hi(h):
    return None if h == INF else int(h)


class LaurentSeries:
    __slots__ = ("spec", "domain", "pi_prec", "z_low", "z_high", "coeffs")

    def __init__(self, spec, coeffs, z_low=0, z_high=None, pi_prec=None, domain=INTEGRAL, canonical=False):
        if domain == RESIDUE:
            pi_prec = 1
        elif pi_prec is None:
            raise ValueError("integral series need a pi-adic precision")
        self.spec = spec
        self.domain = domain
        self.pi_prec = pi_prec
        if not canonical:
            coeffs = [spec.canon(c, pi_prec) for c in coeffs]
        else:
            coeffs = list(coeffs)
        if z_high is not None:
            coeffs = coeffs[: max(0, z_high - z_low)]
        # trim zeros on the left (and on the right when exact)
        start = 0
        while start < len(coeffs) and not any(coeffs[start]):
            start += 1
        coeffs = coeffs[start:]
        z_low += start
        if z_high is None:
            while coeffs and not any(coeffs[-1]):
                coeffs.pop()
            if not coeffs:
                z_low = 0
        elif not coeffs:
            z_low = z_high
        self.z_low = z_low
        self.z_high = z_high
        self.coeffs = coeffs

    # -- construction -------------------------------------------------------------

    @classmethod
    def from_ints(cls, spec, ints, pi_prec, z_low=0, z_high=None):
        return cls(spec, [spec.from_int(int(c), pi_prec) for c in ints], z_low, z_high, pi_prec)

    @classmethod
    def from_elems(cls, spec, elems, pi_prec, z_low=0, z_high=None):
        coeffs = []
        for c in elems:
            if isinstance(c, BaseElem):
                pi_prec = min(pi_prec, c.prec)
                coeffs.append(c.coords)
            elif isinstance(c, int):
                coeffs.append(spec.from_int(c, pi_prec))
            else:
                coeffs.append(tuple(c))
        return cls(spec, coeffs, z_low, z_high, pi_prec)

    @classmethod
    def residue(cls, spec, coeffs, z_low=0, z_high=None):
        """Series over F_q; coefficients are ResidueElem, ints or coordinate tuples."""
        raw = []
        for c in coeffs:
            if isinstance(c, ResidueElem):
                c = c.coords
            elif isinstance(c, int):
                c = (c,)
            c = tuple(c) + (0,) * (spec.fdeg - len(c))
            raw.append(spec.from_residue(tuple(x % spec.p for x in c)))
        return cls(spec, raw, z_low, z_high, 1, RESIDUE)

    @classmethod
    def zero(cls, spec, pi_prec, z_high=None, domain=INTEGRAL):
        return cls(spec, [], 0 if z_high is None else z_high, z_high, pi_prec, domain)

    @classmethod
    def one(cls, spec, pi_prec, z_high=None, domain=INTEGRAL):
        return cls(spec, [spec.one], 0, z_high, pi_prec, domain)

    @classmethod
    def monomial(cls, spec, k, pi_prec, coeff=None, z_high=None, domain=INTEGRAL):
        c = spec.one if coeff is None else coeff
        return cls(spec, [c], k, z_high, pi_prec, domain)

    def _like(self, coeffs, z_low, z_high, pi_prec=None, canonical=False):
        return LaurentSeries(self.spec, coeffs, z_low, z_high,
                             self.pi_prec if pi_prec is None else pi_prec, self.domain, canonical)

    # -- inspection ---------------------------------------------------------------

    @property
    def exact(self):
        return self.z_high is None

    @property
    def high(self):
        """Window bound as a number (infinity when exact)."""
        return _hi(self.z_high)

    def valuation_z(self):
        """Lowest exponent with a nonzero coefficient (window bound if none)."""
        if self.coeffs:
            return self.z_low
        return self.high

    def is_zero(self):
        return not self.coeffs

    def coeff(self, k):
        if k >= self.high:
            raise WindowTooSmall(f"exponent {k} lies outside the known window")
        if k < self.z_low or k - self.z_low >= len(self.coeffs):
            return self.spec.zero
        return self.coeffs[k - self.z_low]

    def coeff_elem(self, k):
        if self.domain == RESIDUE:
            return ResidueElem(self.spec, self.spec.residue(self.coeff(k)))
        return BaseElem(self.spec, self.coeff(k), self.pi_prec)

    def dense(self, lo, hi):
        """Coefficients for exponents lo..hi-1 (zeros outside the support)."""
        if hi > self.high:
            raise WindowTooSmall(f"exponent {hi - 1} lies outside the known window")
        zero = self.spec.zero
        out = []
        for k in range(lo, hi):
            i = k - self.z_low
            out.append(self.coeffs[i] if 0 <= i < len(self.coeffs) else zero)
        return out

    def first_unit_exponent(self):
        """Lowest exponent whose coefficient is a unit of o_L, or None."""
        for i, c in enumerate(self.coeffs):
            if self.spec.is_unit(c):
                return self.z_low + i
        return None

    def __repr__(self):
        hi = "exact" if self.exact else self.z_high
        return (f"LaurentSeries({self.domain}, N={self.pi_prec}, low={self.z_low}, "
                f"high={hi}, {[list(c) for c in self.coeffs]})")

    # -- compatibility --------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecMismatch("series over different base rings")
        if other.domain != self.domain:
            raise DomainMismatch("integral and residue series cannot be combined")
        return other

    def _coerce(self, other):
        if isinstance(other, LaurentSeries):
            return self._check(other)
        if isinstance(other, int):
            if self.domain == RESIDUE:
                return LaurentSeries.residue(self.spec, [other])
            return LaurentSeries.from_ints(self.spec, [other], self.pi_prec)
        if isinstance(other, BaseElem):
            return LaurentSeries(self.spec, [other.coords], 0, None, other.prec, self.domain)
        if isinstance(other, ResidueElem):
            return LaurentSeries.residue(self.spec, [other])
        return NotImplemented

    # -- ring operations ------------------------------------------------------------

    def _addsub(self, other, sign):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        n = min(self.pi_prec, other.pi_prec)
        high = min(self.high, other.high)
        if not self.coeffs and not other.coeffs:
            return self._like([], 0 if high == INF else high, _from_hi(high), n)
        lows = [s.z_low for s in (self, other) if s.coeffs]
        lo = min(lows)
        top = max(s.z_low + len(s.coeffs) for s in (self, other) if s.coeffs)
        if high != INF:
            top = min(top, int(high))
        lo = min(lo, top)
        mods = spec.moduli(n if self.domain != RESIDUE else 1)
        zero = spec.zero
        A, alo, alen = self.coeffs, self.z_low, len(self.coeffs)
        B, blo, blen = other.coeffs, other.z_low, len(other.coeffs)
        out = []
        for k in range(lo, top):
            a = A[k - alo] if 0 <= k - alo < alen else zero
            b = B[k - blo] if 0 <= k - blo < blen else zero
            if sign > 0:
                out.append(tuple((x + y) % m for x, y, m in zip(a, b, mods)))
            else:
                out.append(tuple((x - y) % m for x, y, m in zip(a, b, mods)))
        return self._like(out, lo, _from_hi(high), n, canonical=True)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return self._like([tuple(-x for x in c) for c in self.coeffs], self.z_low, self.z_high)

    def __mul__(self, other):
        if isinstance(other, (int, BaseElem)) and not isinstance(other, bool):
            return self.scale(other)
        if isinstance(other, ResidueElem):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        n = min(self.pi_prec, other.pi_prec)
        vf, vg = self.valuation_z(), other.valuation_z()
        high = min(self.high + vg, other.high + vf)
        if not self.coeffs or not other.coeffs:
            return self._like([], 0 if high == INF else int(high), _from_hi(high), n)
        lo = self.z_low + other.z_low
        limit = None if high == INF else max(0, int(high) - lo)
        A = self.coeffs if self.pi_prec == n else [spec.canon(c, n) for c in self.coeffs]
        B = other.coeffs if other.pi_prec == n else [spec.canon(c, n) for c in other.coeffs]
        prod = spec.series_mul(A, B, n, limit)
        return self._like(prod, lo, _from_hi(high), n, canonical=True)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a scalar; precision follows the valuation of the scalar."""
        spec = self.spec
        if isinstance(c, int):
            c = BaseElem(spec, (c,), self.pi_prec + spec.e * 64)
        if c.is_zero() and self.domain != RESIDUE:
            return self._like([], self.z_low, self.z_high)
        if isinstance(c, ResidueElem):
            c = BaseElem(spec, spec.from_residue(c.coords), 1)
        if self.domain == RESIDUE:
            n = 1
        else:
            vc = c.valuation()
            n = min(c.prec, self.pi_prec + (vc if vc != INF else c.prec))
        raw = c.coords
        return self._like([spec.mul(a, raw, n) for a in self.coeffs], self.z_low, self.z_high, n)

    def __pow__(self, k):
        if k < 0:
            return self.invert_unit() ** (-k)
        result = LaurentSeries.one(self.spec, self.pi_prec, domain=self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by Z^k."""
        return self._like(self.coeffs, self.z_low + k, None if self.exact else self.z_high + k)

    def truncate(self, high):
        """Forget everything at exponents >= high."""
        high = min(self.high, high)
        return self._like(self.coeffs, self.z_low, _from_hi(high))

    def with_prec(self, n):
        if n > self.pi_prec:
            raise PrecisionExhausted(f"cannot raise precision from {self.pi_prec} to {n}")
        return self._like(self.coeffs, self.z_low, self.z_high, n)

    def div_pi(self, k=1):
        """Exact division by pi^k; NotDivisible when some coefficient is not divisible."""
        coeffs, n = list(self.coeffs), self.pi_prec
        spec = self.spec
        for _ in range(k):
            new = []
            for c in coeffs:
                if spec.is_zero(c, n):
                    new.append(spec.zero)
                else:
                    new.append(spec.div_pi(c, n))
            coeffs, n = new, n - 1
        return self._like(coeffs, self.z_low, self.z_high, n)

    def mul_pi(self, k=1):
        """Multiply by pi^k; the pi-adic precision grows by k."""
        spec = self.spec
        n = self.pi_prec + k
        pik = spec.pow(spec.pi_raw(n), k, n)
        return self._like([spec.mul(c, pik, n) for c in self.coeffs], self.z_low, self.z_high, n)

    def equal_in_window(self, other):
        """Equality on the common window at the common precision."""
        other = self._coerce(other)
        d = self - other
        return d.is_zero()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.equal_in_window(other)

    __hash__ = None

    # -- calculus -----------------------------------------------------------------

    def derivative(self):
        spec = self.spec
        n = self.pi_prec
        out = [spec.scale_int(c, self.z_low + i, n) for i, c in enumerate(self.coeffs)]
        return self._like(out, self.z_low - 1, None if self.exact else self.z_high - 1)

    def reduce_mod_pi(self):
        if self.domain == RESIDUE:
            return self
        spec = self.spec
        return LaurentSeries(spec, [spec.from_residue(spec.residue(c)) for c in self.coeffs],
                             self.z_low, self.z_high, 1, RESIDUE)

    def lift_from_residue(self, n):
        """Lift coefficientwise by Teichmueller representatives."""
        spec = self.spec
        cache = {}
        out = []
        for c in self.coeffs:
            r = spec.residue(c)
            if r not in cache:
                cache[r] = spec.teichmuller(r, n)
            out.append(cache[r])
        return LaurentSeries(spec, out, self.z_low, self.z_high, n, INTEGRAL)

    def invert_unit(self, high=None):
        """Inverse in the Laurent ring.

        Writes f = a + b with a = Z^k * (unit power series), k the first
        exponent carrying a unit coefficient, and b the pi-divisible part
        below k; then 1/f = a^-1 * sum_j (-b/a)^j, a finite sum mod pi^N.
        ``high`` is required when f is exact and caps the window otherwise.
        """
        spec = self.spec
        n = self.pi_prec
        k = self.first_unit_exponent()
        if k is None:
            raise NotAUnit("no coefficient is a unit")
        lo = self.z_low
        if self.exact and len(self.coeffs) == 1:
            mono = self._like([spec.inv(self.coeffs[0], n)], -k, None)
            return mono if high is None else mono.truncate(high)
        a = self._like(self.coeffs[k - lo:], k, self.z_high)
        b = self._like(self.coeffs[: k - lo], lo, None)
        loss = 0 if b.is_zero() else (n - 1) * (k - lo)
        if self.exact:
            if high is None:
                raise PrecisionExhausted("inverting an exact series needs a target window")
            length = int(high) + loss + k
        else:
            length = self.z_high - k
            if length <= 0:
                raise PrecisionExhausted("window too small to invert")
        if length <= 0:
            return self._like([], int(high), int(high))
        u = a.dense(k, k + length) if not a.exact else (a.coeffs + [spec.zero] * length)[:length]
        uinv = power_series_inverse(spec, u, n, length)
        ainv = self._like(uinv, -k, length - k)
        if b.is_zero():
            result = ainv
        else:
            y = -(ainv * b)
            term = LaurentSeries.one(spec, n, domain=self.domain)
            total = term
            for _ in range(1, n):
                term = term * y
                if term.is_zero():
                    break
                total = total + term
            result = ainv * total
        if high is not None:
            result = result.truncate(high)
        return result

    def compose(self, g, high=None):
        """f(g) for g of positive Z-order; window per the module docstring."""
        g = self._check(g)
        spec = self.spec
        n = min(self.pi_prec, g.pi_prec)
        r = g.valuation_z()
        if r == INF or r < 1:
            raise IllegalSubstituend("substituend must have positive Z-order")
        r0 = g.first_unit_exponent()
        if r0 is None:
            r0 = g.high
        f = self
        vf = f.valuation_z()
        if f.coeffs and vf < 0:
            if r0 != r:
                raise IllegalSubstituend("cannot substitute into poles: leading coefficient not a unit")
            base = f.shift(-vf)
            inner = base.compose(g, None if high is None else high - r * vf)
            if g.exact:
                target = inner.high + r if inner.high != INF else high
                if target is None:
                    raise PrecisionExhausted("substituting into poles of an exact series needs a window")
                ginv = g.invert_unit(target)
            else:
                ginv = g.invert_unit()
            result = inner * (ginv ** (-vf))
            return result if high is None else result.truncate(high)
        # bound from the unknown tail of f
        m = f.high
        if m == INF:
            h_f = INF
        elif r0 == INF:
            h_f = r * m if m <= n - 1 else INF
        else:
            t = min(n - 1, m)
            h_f = r * t + r0 * (m - t)
        # bound from the uncertainty in g
        if g.exact:
            h_g = INF
        else:
            pos = [f.z_low + i for i, c in enumerate(f.coeffs) if f.z_low + i >= 1]
            v1 = pos[0] if pos else m
            h_g = INF if v1 == INF else g.high + r * (v1 - 1)
        window = min(h_f, h_g)
        if high is not None:
            window = min(window, high)
        if window == INF:
            deg = f.z_low + len(f.coeffs) - 1
            window = deg * (g.z_low + len(g.coeffs) - 1) + 1 if f.coeffs else 1
            exact = True
        else:
            exact = False
        T = int(window)
        if T <= 0:
            return self._like([], T, T, n)
        g_top = g.z_low + len(g.coeffs) if g.exact else int(g.high)
        G = [spec.canon(c, n) for c in g.dense(0, min(T, g_top))]
        # Horner over the coefficients that can reach below T
        top = min(f.z_low + len(f.coeffs), (T - 1) // r + 1)
        acc = []
        for k in range(top - 1, -1, -1):
            if acc:
                acc = spec.series_mul(acc, G, n, T)
            ck = spec.canon(f.coeff(k), n) if k >= f.z_low else spec.zero
            if any(ck):
                if acc:
                    acc[0] = spec.add(acc[0], ck, n)
                else:
                    acc = [ck]
        return self._like(acc, 0, None if exact else T, n)

    # -- serialization -------------------------------------------------------------

    def to_json(self):
        spec = self.spec
        if self.domain == RESIDUE:
            coeffs = [[str(x) for x in spec.residue(c)] for c in self.coeffs]
        else:
            coeffs = [{"coords": [str(x) for x in c], "prec": self.pi_prec} for c in self.coeffs]
        return {
            "domain": self.domain,
            "pi_prec": self.pi_prec,
            "z_low": self.z_low,
            "z_high": self.z_high,
            "coeffs": coeffs,
        }

    @classmethod
    def from_json(cls, spec, doc):
        domain = doc.get("domain", INTEGRAL)
        z_low = int(doc.get("z_low", 0))
        z_high = doc.get("z_high")
        z_high = None if z_high is None else int(z_high)
        if domain == RESIDUE:
            coeffs = [tuple(int(x) for x in c) if isinstance(c, list) else (int(c),) for c in doc["coeffs"]]
            return cls.residue(spec, coeffs, z_low, z_high)
        n = int(doc["pi_prec"])
        coeffs = []
        for c in doc["coeffs"]:
            if isinstance(c, dict):
                coords = [int(x) for x in c["coords"]]
            elif isinstance(c, list):
                coords = [int(x) for x in c]
            else:
                coords = [int(c)]
            coeffs.append(tuple(coords) + (0,) * (spec.d - len(coords)))
        return cls(spec, coeffs, z_low, z_high, n)


def power_series_inverse(spec, u, n, length):
    """Inverse of a power series with unit constant term, modulo Z^length."""
    if not u or not spec.is_unit(u[0]):
        raise NotAUnit("constant term is not a unit")
    v = [spec.inv(u[0], n)]
    two = spec.from_int(2, n)
    prec = 1
    while prec < length:
        prec = min(2 * prec, length)
        uv = spec.series_mul(u[:prec], v, n, prec)
        t = [spec.neg(c, n) for c in uv] + [spec.zero] * (prec - len(uv))
        t[0] = spec.add(t[0], two, n)
        v = spec.series_mul(v, t, n, prec)
    return v


# -- public functional interface ------------------------------------------------

def s_arith(f, g, kind):
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    raise ValueError(f"unknown operation {kind!r}")


def invert_unit(f, high=None):
    return f.invert_unit(high)


def compose(f, g, high=None):
    return f.compose(g, high)


def derivative(f):
    return f.derivative()


def reduce_mod_pi(f):
    return f.reduce_mod_pi()


def lift_from_residue(f, n):
    return f.lift_from_residue(n)


# -- series with denominators ---------------------------------------------------

class LElem:
    """An element pi^(-shift) * num of L, known modulo pi^absprec."""

    __slots__ = ("spec", "num", "shift", "absprec")

    def __init__(self, spec, num, shift, absprec):
        self.spec = spec
        self.absprec = absprec
        rel = absprec + shift
        if rel <= 0:
            num, shift = spec.zero, max(shift, 0)
            rel = absprec + shift
        num = spec.canon(num, max(rel, 0))
        while shift > 0 and any(num) and not spec.is_unit(num):
            num = spec.div_pi(num, rel)
            shift -= 1
            rel -= 1
        if not any(num):
            shift = 0
            num = spec.zero
        self.num = num
        self.shift = shift

    @classmethod
    def from_base(cls, x):
        return cls(x.spec, x.coords, 0, x.prec)

    @classmethod
    def from_int(cls, spec, k, absprec):
        return cls(spec, spec.from_int(k, absprec), 0, absprec)

    def valuation(self):
        if not any(self.num):
            return self.absprec
        return self.spec.valuation_raw(self.num, self.absprec + self.shift) - self.shift

    def is_zero(self):
        return not any(self.num)

    def _aligned(self, shift, rel):
        spec = self.spec
        extra = shift - self.shift
        x = spec.canon(self.num, rel)
        if extra:
            x = spec.mul(x, spec.pow(spec.pi_raw(rel), extra, rel), rel)
        return x

    def __add__(self, other):
        spec = self.spec
        s = max(self.shift, other.shift)
        a = min(self.absprec, other.absprec)
        rel = a + s
        if rel <= 0:
            return LElem(spec, spec.zero, 0, a)
        return LElem(spec, spec.add(self._aligned(s, rel), other._aligned(s, rel), rel), s, a)

    def __neg__(self):
        rel = self.absprec + self.shift
        return LElem(self.spec, self.spec.neg(self.num, max(rel, 0)), self.shift, self.absprec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        spec = self.spec
        a = min(self.absprec + other.valuation(), other.absprec + self.valuation())
        s = self.shift + other.shift
        rel = a + s
        if rel <= 0:
            return LElem(spec, spec.zero, 0, a)
        return LElem(spec, spec.mul(spec.canon(self.num, rel), spec.canon(other.num, rel), rel), s, a)

    def mul_int(self, k):
        rel = self.absprec + self.shift
        if rel <= 0:
            return self
        return LElem(self.spec, self.spec.scale_int(self.num, k, rel), self.shift, self.absprec)

    def div_int(self, k):
        """Divide by a nonzero integer."""
        spec = self.spec
        v = 0
        while k % spec.p == 0:
            k //= spec.p
            v += 1
        # k is now prime to p; p^v = pi^(e v) * unit, absorbed by shifting
        rel = self.absprec + self.shift
        num = spec.mul(spec.canon(self.num, rel), spec.inv(spec.from_int(k, rel), rel), rel) if rel > 0 else spec.zero
        if v:
            pv = spec.from_int(spec.p ** v, rel + 2 * spec.e * v)
            # p^v / pi^(e v) is a unit; divide it out exactly
            unit = pv
            for _ in range(spec.e * v):
                unit = spec.div_pi(unit, rel + 2 * spec.e * v)
            num = spec.mul(num, spec.inv(spec.canon(unit, rel), rel), rel) if rel > 0 else spec.zero
        return LElem(spec, num, self.shift + spec.e * v, self.absprec - spec.e * v)

    def equals(self, other):
        """Equality modulo the coarser of the two absolute precisions."""
        d = self - other
        return d.is_zero()

    def to_json(self):
        return {"num": [str(x) for x in self.num], "den_pi_power": self.shift, "abs_prec": self.absprec}

    def __repr__(self):
        return f"LElem({list(self.num)}/pi^{self.shift}, abs={self.absprec})"


class RationalSeries:
    """Power series with coefficients in L, each with its own precision.

    ``budget`` bounds the pi-power allowed in any denominator.
    """

    __slots__ = ("spec", "coeffs", "budget")

    def __init__(self, spec, coeffs, budget):
        self.spec = spec
        self.coeffs = list(coeffs)
        self.budget = budget
        for c in self.coeffs:
            if c.shift > budget:
                raise DenominatorBudgetExceeded(
                    f"denominator pi^{c.shift} exceeds the budget pi^{budget}")

    @classmethod
    def from_series(cls, f, budget, length=None):
        if f.z_low < 0:
            raise DomainMismatch("rational series here are power series")
        if f.exact:
            natural = f.z_low + len(f.coeffs) if f.coeffs else 1
            length = natural if length is None else length
        else:
            length = int(f.high) if length is None else min(length, int(f.high))
        spec = f.spec
        coeffs = [LElem(spec, c, 0, f.pi_prec) for c in f.dense(0, length)]
        return cls(spec, coeffs, budget)

    def __len__(self):
        return len(self.coeffs)

    def _zero(self):
        return LElem(self.spec, self.spec.zero, 0, EXACT_PREC)

    def __add__(self, other):
        n = min(len(self), len(other))
        return RationalSeries(self.spec, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])],
                              max(self.budget, other.budget))

    def __sub__(self, other):
        n = min(len(self), len(other))
        return RationalSeries(self.spec, [a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])],
                              max(self.budget, other.budget))

    def __mul__(self, other):
        if isinstance(other, LElem):
            return RationalSeries(self.spec, [c * other for c in self.coeffs], self.budget)
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = None
            for i in range(k + 1):
                t = self.coeffs[i] * other.coeffs[k - i]
                acc = t if acc is None else acc + t
            out.append(acc)
        return RationalSeries(self.spec, out, max(self.budget, other.budget))

    def derivative(self):
        out = [self.coeffs[k].mul_int(k) for k in range(1, len(self))]
        return RationalSeries(self.spec, out, self.budget)

    def integral(self):
        """Antiderivative with zero constant term."""
        out = [LElem.from_int(self.spec, 0, EXACT_PREC)]
        out += [c.div_int(k + 1) for k, c in enumerate(self.coeffs)]
        return RationalSeries(self.spec, out, self.budget)

    def inverse(self):
        """Multiplicative inverse of a series with constant term 1."""
        c0 = self.coeffs[0]
        if not (c0 - LElem.from_int(self.spec, 1, c0.absprec)).is_zero():
            raise NotAUnit("only series with constant term 1 are inverted here")
        out = [c0]
        for k in range(1, len(self)):
            acc = None
            for i in range(1, k + 1):
                t = self.coeffs[i] * out[k - i]
                acc = t if acc is None else acc + t
            out.append(-acc)
        return RationalSeries(self.spec, out, self.budget)

    def compose(self, g):
        """self(g) for g with zero constant term."""
        if not g.coeffs[0].is_zero():
            raise IllegalSubstituend("substituend must have zero constant term")
        n = min(len(self), len(g))
        budget = max(self.budget, g.budget)
        work = budget * n + n
        g = RationalSeries(self.spec, g.coeffs, work)
        acc = RationalSeries(self.spec, [self.coeffs[n - 1]] + [self._zero()] * (n - 1), work)
        for k in range(n - 2, -1, -1):
            acc = acc * g
            acc.coeffs[0] = acc.coeffs[0] + self.coeffs[k]
        return RationalSeries(self.spec, acc.coeffs, budget)

    def reversion(self):
        """Compositional inverse by Lagrange inversion: [Z^k] = (1/k) [W^(k-1)] (W/f)^k."""
        spec = self.spec
        n = len(self)
        one = LElem.from_int(spec, 1, self.coeffs[1].absprec)
        if not (self.coeffs[1] - one).is_zero() or not self.coeffs[0].is_zero():
            raise ValueError("reversion expects Z + O(Z^2)")
        # intermediate powers may carry deeper denominators than the result
        work = self.budget * n + n
        h = RationalSeries(spec, self.coeffs[1:], work).inverse()
        out = [LElem.from_int(spec, 0, EXACT_PREC)]
        power = RationalSeries(spec, [one] + [self._zero()] * (len(h) - 1), work)
        for k in range(1, n):
            power = power * h
            out.append(power.coeffs[k - 1].div_int(k))
        return RationalSeries(spec, out, self.budget)

    def min_absprec(self):
        return min(c.absprec for c in self.coeffs)

    def equals(self, other, upto=None):
        n = min(len(self), len(other))
        if upto is not None:
            n = min(n, upto)
        return all(a.equals(b) for a, b in zip(self.coeffs[:n], other.coeffs[:n]))

    def to_json(self):
        return {"coeffs": [c.to_json() for c in self.coeffs], "budget": self.budget}
