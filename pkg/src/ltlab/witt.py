"""Ramified Witt vectors W_n(B)_L with ghost components
Phi_i(x) = x_0^(q^i) + pi x_1^(q^(i-1)) + ... + pi^i x_i.

Domains: "k" (the residue field), "k((Z))" (residue Laurent series), "o_L"
(o_L / pi^N) and "A_L" (integral Laurent series mod pi^N).

Arithmetic evaluates the universal sum, product and negation polynomials at a
point: the components are lifted to a pi-torsion-free ring with n extra
digits, the ghost components are combined, and the Witt components are
recovered one at a time by exact pi-division.  Integrality of the universal
polynomials makes the result independent of the lift, and in characteristic p
nothing is ever divided.  ``UniversalPolys`` builds the same polynomials
symbolically; it serves as an independent check for small lengths.
"""

from __future__ import annotations

from .base_ring import BaseElem, ResidueElem
from .errors import DomainMismatch, NotDivisible, NotInImage, PrecisionExhausted, WindowTooSmall
from .series import RESIDUE, LaurentSeries

K, KZ, OL, AL = "k", "k((Z))", "o_L", "A_L"
DOMAINS = (K, KZ, OL, AL)
CHAR_P = (K, KZ)


class WittVec:
    """A Witt vector of length ``len(components)`` over ``domain``."""

    __slots__ = ("spec", "domain", "components")

    def __init__(self, spec, domain, components):
        if domain not in DOMAINS:
            raise DomainMismatch(f"unknown Witt domain {domain!r}")
        if not components:
            raise ValueError("a Witt vector needs at least one component")
        self.spec = spec
        self.domain = domain
        self.components = list(components)
        for c in self.components:
            _check_component(domain, c)

    @property
    def n(self):
        return len(self.components)

    def __len__(self):
        return self.n

    def _same(self, other):
        if not isinstance(other, WittVec):
            raise DomainMismatch("expected a Witt vector")
        if other.domain != self.domain:
            raise DomainMismatch("Witt vectors over different domains")
        if other.n != self.n:
            raise DomainMismatch("Witt vectors of different lengths")

    def __add__(self, other):
        return witt_arith(self, other, "add")

    def __sub__(self, other):
        return witt_arith(self, other, "sub")

    def __mul__(self, other):
        return witt_arith(self, other, "mul")

    def __neg__(self):
        return witt_neg(self)

    def __eq__(self, other):
        if not isinstance(other, WittVec):
            return NotImplemented
        if other.domain != self.domain or other.n != self.n:
            return False
        return all(_eq(a, b) for a, b in zip(self.components, other.components))

    __hash__ = None

    def is_zero(self):
        return all(_is_zero(c) for c in self.components)

    def __repr__(self):
        return f"WittVec({self.domain}, {self.components!r})"

    def to_json(self):
        return {"len": self.n, "domain": self.domain,
                "components": [_comp_json(c) for c in self.components]}

    @classmethod
    def from_json(cls, spec, doc):
        domain = doc["domain"]
        comps = [_comp_from_json(spec, domain, c) for c in doc["components"]]
        if int(doc.get("len", len(comps))) != len(comps):
            raise ValueError("length does not match the component list")
        return cls(spec, domain, comps)


# -- component helpers ----------------------------------------------------------

def _check_component(domain, c):
    ok = {
        K: isinstance(c, ResidueElem),
        KZ: isinstance(c, LaurentSeries) and c.domain == RESIDUE,
        OL: isinstance(c, BaseElem),
        AL: isinstance(c, LaurentSeries) and c.domain != RESIDUE,
    }[domain]
    if not ok:
        raise DomainMismatch(f"component {c!r} does not belong to {domain}")


def _eq(a, b):
    return a == b


def _is_zero(c):
    return c.is_zero()


def _comp_json(c):
    return c.to_json()


def _comp_from_json(spec, domain, doc):
    if domain == K:
        coords = doc if isinstance(doc, list) else [doc]
        return ResidueElem(spec, tuple(int(x) for x in coords))
    if domain == OL:
        if isinstance(doc, dict):
            return BaseElem.from_json(spec, doc)
        raise ValueError("o_L components are {coords, prec} objects")
    return LaurentSeries.from_json(spec, doc)


def _precision(x):
    """The pi-adic precision of the components (1 in characteristic p)."""
    if x.domain in CHAR_P:
        return 1
    if x.domain == OL:
        return min(c.prec for c in x.components)
    return min(c.pi_prec for c in x.components)


def _lift(spec, domain, c, M):
    """A lift of a component to a ring without pi-torsion, at precision M."""
    if domain == K:
        return BaseElem(spec, spec.from_residue(c.coords), M)
    if domain == OL:
        return BaseElem(spec, c.coords, M)
    return LaurentSeries(spec, c.coeffs, c.z_low, c.z_high, M)


def _down(spec, domain, v, N):
    """Back from a lift to the domain (precision N for pi-torsion-free domains)."""
    if domain == K:
        return ResidueElem(spec, spec.residue(v.coords))
    if domain == KZ:
        return v.reduce_mod_pi()
    if domain == OL:
        return BaseElem(spec, v.coords, min(N, v.prec))
    return v.with_prec(min(N, v.pi_prec))


def _mul_pi(v, j):
    """pi^j * v, known j digits further than v."""
    if j == 0:
        return v
    if isinstance(v, BaseElem):
        spec = v.spec
        P = v.prec + j
        return BaseElem(spec, spec.mul(v.coords, spec.pow(spec.pi_raw(P), j, P), P), P)
    return v.mul_pi(j)


def _div_pi(v, j):
    if j == 0:
        return v
    if isinstance(v, BaseElem):
        return v.divide_by_pi_exact(j)
    return v.div_pi(j)


def _prec_of(v):
    return v.prec if isinstance(v, BaseElem) else v.pi_prec


def _with_prec(v, n):
    if isinstance(v, BaseElem):
        return BaseElem(v.spec, v.coords, min(n, v.prec))
    return v.with_prec(min(n, v.pi_prec))


def _zero_like(spec, domain, N):
    if domain == K:
        return ResidueElem(spec, (0,) * spec.fdeg)
    if domain == OL:
        return BaseElem(spec, spec.zero, N)
    return LaurentSeries.zero(spec, N, None, RESIDUE if domain == KZ else "integral")


# -- ghost components -----------------------------------------------------------

def _ghost_lifted(spec, vals):
    """Ghost components of a vector of lifted components."""
    q = spec.q
    out = []
    for i in range(len(vals)):
        acc = None
        for j in range(i + 1):
            t = _mul_pi(vals[j] ** (q ** (i - j)), j)
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def _unghost_lifted(spec, ghosts):
    """Witt components with the given ghost components; NotInImage if none exist."""
    q = spec.q
    comps = []
    for i, g in enumerate(ghosts):
        acc = g
        for j, c in enumerate(comps):
            acc = acc - _with_prec(_mul_pi(c ** (q ** (i - j)), j), _prec_of(acc))
        try:
            comps.append(_div_pi(acc, i))
        except NotDivisible as exc:
            raise NotInImage(f"ghost component {i} violates the image criterion") from exc
    return comps


def ghost(x):
    """Ghost components of a vector over o_L or A_L."""
    if x.domain in CHAR_P:
        raise DomainMismatch("ghost components need a domain without pi-torsion")
    return _ghost_lifted(x.spec, x.components)


def from_ghost(spec, domain, ghosts):
    """Inverse of ``ghost``; component i loses i digits of precision."""
    if domain in CHAR_P:
        raise DomainMismatch("ghost components need a domain without pi-torsion")
    return WittVec(spec, domain, _unghost_lifted(spec, ghosts))


# -- arithmetic -----------------------------------------------------------------

def _lifted(x, extra):
    spec = x.spec
    N = _precision(x)
    M = N + extra
    return [_lift(spec, x.domain, c, M) for c in x.components], N


def witt_arith(x, y, kind):
    """x + y, x - y or x * y by ghost-solving over a lift."""
    x._same(y)
    spec = x.spec
    n = x.n
    xs, Nx = _lifted(x, n - 1)
    ys, Ny = _lifted(y, n - 1)
    gx, gy = _ghost_lifted(spec, xs), _ghost_lifted(spec, ys)
    if kind == "add":
        g = [a + b for a, b in zip(gx, gy)]
    elif kind == "sub":
        g = [a - b for a, b in zip(gx, gy)]
    elif kind == "mul":
        g = [a * b for a, b in zip(gx, gy)]
    else:
        raise ValueError(f"unknown Witt operation {kind!r}")
    comps = _unghost_lifted(spec, g)
    N = min(Nx, Ny)
    return WittVec(spec, x.domain, [_down(spec, x.domain, c, N) for c in comps])


def witt_neg(x):
    spec = x.spec
    xs, N = _lifted(x, x.n - 1)
    g = [-a for a in _ghost_lifted(spec, xs)]
    comps = _unghost_lifted(spec, g)
    return WittVec(spec, x.domain, [_down(spec, x.domain, c, N) for c in comps])


def zero_w(spec, domain, n, N=1):
    return WittVec(spec, domain, [_zero_like(spec, domain, N) for _ in range(n)])


def teichmuller_w(spec, domain, b, n):
    """[b] = (b, 0, ..., 0)."""
    N = 1 if domain in CHAR_P else (b.prec if domain == OL else b.pi_prec)
    return WittVec(spec, domain, [b] + [_zero_like(spec, domain, N) for _ in range(n - 1)])


def vshift(x):
    """Verschiebung (x_0, ..., x_(n-1)) -> (0, x_0, ..., x_(n-1))."""
    N = _precision(x)
    z = _zero_like(x.spec, x.domain, N)
    return WittVec(x.spec, x.domain, [z] + x.components)


def truncate_w(x, n):
    return WittVec(x.spec, x.domain, x.components[:n])


def _frob_component(spec, domain, c):
    q = spec.q
    if domain == K:
        return c ** q
    # k((Z)): sum a_j Z^j -> sum a_j^q Z^(qj), exact on the window
    coeffs = [spec.from_residue(spec.res_pow(spec.residue(a), q)) for a in c.coeffs]
    out = []
    for i, a in enumerate(coeffs):
        out.append(a)
        if i < len(coeffs) - 1:
            out.extend([spec.zero] * (q - 1))
    z_high = None if c.exact else c.z_high * q
    return LaurentSeries(spec, out, c.z_low * q, z_high, 1, RESIDUE)


def frobenius_w(x):
    """Frobenius: componentwise q-th power in characteristic p; otherwise the
    ghost shift Phi_i(F x) = Phi_(i+1)(x), which shortens the vector by one."""
    spec = x.spec
    if x.domain in CHAR_P:
        return WittVec(spec, x.domain, [_frob_component(spec, x.domain, c) for c in x.components])
    if x.n < 2:
        raise DomainMismatch("the ghost-shift Frobenius needs length at least 2")
    xs, N = _lifted(x, x.n - 1)
    g = _ghost_lifted(spec, xs)[1:]
    comps = _unghost_lifted(spec, g)
    return WittVec(spec, x.domain, [_down(spec, x.domain, c, N) for c in comps])


def wp(x):
    """The Artin-Schreier-Witt operator frobenius_w - id (characteristic p)."""
    if x.domain not in CHAR_P:
        raise DomainMismatch("frobenius_w - id is taken in characteristic p")
    return frobenius_w(x) - x


# -- s-maps and w-maps ----------------------------------------------------------

def s_map(b, n, ctx=None):
    """The components of s(b) reduced mod pi, for b in o_L/pi^n or A_L/pi^n.

    Phi_i(s(b)) = sigma^i(b), with sigma = id on o_L and sigma = phi on A_L
    (``ctx`` supplies phi).
    """
    spec = b.spec
    q = spec.q
    if isinstance(b, BaseElem):
        domain, prec = K, b.prec
    else:
        if b.domain == RESIDUE:
            raise DomainMismatch("s-map takes an integral input")
        if ctx is None:
            raise DomainMismatch("the s-map on Laurent series needs a Coleman context")
        domain, prec = KZ, b.pi_prec
    if prec < n:
        raise WindowTooSmall(f"s-map at length {n} needs precision {n}")
    b = _with_prec(b, n)
    sig = b
    comps = []
    lifts = []
    for i in range(n):
        acc = sig
        for j, c in enumerate(lifts):
            acc = acc - _mul_pi(c ** (q ** (i - j)), j)
        if _prec_of(acc) < i + 1:
            raise PrecisionExhausted(f"s-map component {i} needs precision {i + 1}")
        acc = _with_prec(acc, i + 1)
        digit = _div_pi(acc, i)
        if domain == K:
            comp = ResidueElem(spec, spec.residue(digit.coords))
        else:
            comp = digit.reduce_mod_pi()
        comps.append(comp)
        lifts.append(_lift(spec, domain, comp, n))
        if i < n - 1 and domain == KZ:
            sig = ctx.phi(sig)
    return WittVec(spec, domain, comps)


def w_map(x, n=None):
    """Phi_(n-1) of Teichmueller-coefficient lifts, reduced mod pi^n."""
    if x.domain not in CHAR_P:
        raise DomainMismatch("w-map takes a vector over the residue side")
    spec = x.spec
    n = x.n if n is None else n
    lifts = [_teich_lift(spec, x.domain, c, n) for c in x.components[:n]]
    return _ghost_lifted(spec, lifts)[n - 1]


def w_map_with_lifts(x, lifts, n=None):
    """Phi_(n-1) of the given lifts reduced mod pi^n (for lift-independence checks)."""
    spec = x.spec
    n = x.n if n is None else n
    return _ghost_lifted(spec, [_with_prec(v, n) for v in lifts[:n]])[n - 1]


def _teich_lift(spec, domain, c, n):
    if domain == K:
        return BaseElem(spec, spec.teichmuller(c.coords, n), n)
    return c.lift_from_residue(n)


# -- the decomposition x = Omega(x) + x^+ + x^- ---------------------------------

def _split(c):
    """(constant, positive part, negative part) of a residue Laurent series."""
    spec = c.spec
    if c.high <= 0:
        raise WindowTooSmall("the window must reach the constant term")
    const = LaurentSeries(spec, [c.coeff(0)], 0, None, 1, RESIDUE)
    neg = LaurentSeries(spec, [c.coeff(k) for k in range(c.z_low, 0)], c.z_low, None, 1, RESIDUE) \
        if c.z_low < 0 else LaurentSeries.zero(spec, 1, None, RESIDUE)
    pos_coeffs = [c.coeff(k) for k in range(1, c.z_low + len(c.coeffs))] if c.coeffs else []
    pos = LaurentSeries(spec, pos_coeffs, 1, c.z_high, 1, RESIDUE)
    return const, pos, neg


def omega_decompose(x):
    """(Omega(x), x^+, x^-) with Omega(x) over k, x^+ over Z k[[Z]] and x^- over
    Z^-1 k[Z^-1]; their Witt sum is x."""
    if x.domain != KZ:
        raise DomainMismatch("the decomposition is defined over k((Z))")
    spec = x.spec
    consts, plus, minus = [], [], []
    cur = x
    while True:
        c0, p0, m0 = _split(cur.components[0])
        consts.append(c0)
        plus.append(p0)
        minus.append(m0)
        if cur.n == 1:
            break
        rest = cur
        for part in (c0, p0, m0):
            rest = rest - teichmuller_w(spec, KZ, part, cur.n)
        cur = WittVec(spec, KZ, rest.components[1:])
    return (WittVec(spec, KZ, consts), WittVec(spec, KZ, plus), WittVec(spec, KZ, minus))


def in_constants(x):
    return all(c.exact and (not c.coeffs or (c.z_low == 0 and len(c.coeffs) == 1)) for c in x.components)


def in_plus(x):
    return all(c.is_zero() or c.z_low >= 1 for c in x.components)


def in_minus(x):
    return all(c.exact and (c.is_zero() or c.z_low + len(c.coeffs) <= 0) for c in x.components)


def constant_part(x):
    """The constant Witt vector in W_n(k) carried by a vector of constants."""
    spec = x.spec
    comps = [ResidueElem(spec, spec.residue(c.coeff(0))) if c.high > 0 else None for c in x.components]
    if any(c is None for c in comps):
        raise WindowTooSmall("the window must reach the constant term")
    return WittVec(spec, K, comps)


def as_series_vector(x):
    """A vector over k viewed over k((Z))."""
    spec = x.spec
    return WittVec(spec, KZ, [LaurentSeries.residue(spec, [c]) for c in x.components])


# -- symbolic universal polynomials ---------------------------------------------

class UniversalPolys:
    """Sum, product and negation polynomials S_i, P_i, N_i modulo pi^prec.

    Polynomials are dicts from packed monomials in X_0..X_(n-1), Y_0..Y_(n-1)
    to coordinate tuples.  Built by ghost-solving; every division by pi is
    exact, which is the integrality statement.

    Step i only needs the ghost target modulo pi^(i + prec): if a is known
    modulo pi^m then a^q is known modulo pi^(m+1), so pi^j S_j^(q^(i-j)) is
    determined modulo pi^(i + prec) by S_j modulo pi^prec.  Powers are taken
    one q-th power at a time, each at the precision it determines.
    """

    def __init__(self, spec, n, prec=None):
        self.spec = spec
        self.n = n
        self.prec = prec or 1
        # every exponent stays below q^(n-1) + 1, so this many bits never carry
        self.bits = (spec.q ** (n - 1)).bit_length() + 1
        self.sum = self._solve("add")
        self.prod = self._solve("mul")
        self.neg = self._solve("neg")

    # polynomial arithmetic modulo pi^M; monomials are packed into one integer
    # with a fixed number of bits per variable, so multiplying monomials is
    # integer addition.  Products are accumulated unreduced and folded once.
    def _add(self, A, B, M, sign=1):
        spec = self.spec
        out = dict(A)
        for k, c in B.items():
            if k in out:
                v = spec.add(out[k], c, M) if sign > 0 else spec.sub(out[k], c, M)
            else:
                v = spec.canon(c, M) if sign > 0 else spec.neg(c, M)
            if spec.is_zero(v, M):
                out.pop(k, None)
            else:
                out[k] = v
        return out

    def _raw_product(self, a, b):
        """The product of two coordinate tuples before reduction, flattened."""
        e, f = self.spec.e, self.spec.fdeg
        w = 2 * f - 1
        out = [0] * ((2 * e - 1) * w)
        for i1 in range(e):
            for j1 in range(f):
                x = a[i1 * f + j1]
                if not x:
                    continue
                for i2 in range(e):
                    base = (i1 + i2) * w + j1
                    for j2 in range(f):
                        y = b[i2 * f + j2]
                        if y:
                            out[base + j2] += x * y
        return out

    def _finish(self, acc, M):
        spec = self.spec
        out = {}
        if spec.d == 1:
            mod = spec.moduli(M)[0]
            for k, v in acc.items():
                v %= mod
                if v:
                    out[k] = (v,)
            return out
        e, f = spec.e, spec.fdeg
        w = 2 * f - 1
        big = spec.p ** spec.work_digits(M)
        for k, v in acc.items():
            rows = [list(v[i * w:(i + 1) * w]) for i in range(2 * e - 1)]
            c = spec.canon(spec._fold(rows, big), M)
            if not spec.is_zero(c, M):
                out[k] = c
        return out

    def _mul(self, A, B, M):
        acc = {}
        get = acc.get
        if self.spec.d == 1:
            Bi = [(kb, cb[0]) for kb, cb in B.items()]
            for ka, ca in A.items():
                x = ca[0]
                for kb, y in Bi:
                    k = ka + kb
                    acc[k] = get(k, 0) + x * y
            return self._finish(acc, M)
        for ka, ca in A.items():
            for kb, cb in B.items():
                k = ka + kb
                t = self._raw_product(ca, cb)
                old = get(k)
                acc[k] = t if old is None else [u + v for u, v in zip(old, t)]
        return self._finish(acc, M)

    def _sqr(self, A, M):
        """A * A using each unordered pair of terms once."""
        items = list(A.items())
        acc = {}
        get = acc.get
        if self.spec.d == 1:
            vals = [(k, c[0]) for k, c in items]
            for i, (ka, x) in enumerate(vals):
                k = ka + ka
                acc[k] = get(k, 0) + x * x
                x2 = 2 * x
                for kb, y in vals[i + 1:]:
                    k = ka + kb
                    acc[k] = get(k, 0) + x2 * y
            return self._finish(acc, M)
        for i, (ka, ca) in enumerate(items):
            for kb, cb in items[i:]:
                k = ka + kb
                t = self._raw_product(ca, cb)
                if kb != ka:
                    t = [2 * u for u in t]
                old = get(k)
                acc[k] = t if old is None else [u + v for u, v in zip(old, t)]
        return self._finish(acc, M)

    def _pow(self, A, e, M):
        result = None
        base = A
        while e:
            if e & 1:
                result = base if result is None else self._mul(result, base, M)
            e >>= 1
            if e:
                base = self._sqr(base, M)
        return {0: self.spec.one} if result is None else self._finish_copy(result, M)

    def _finish_copy(self, A, M):
        spec = self.spec
        return {k: spec.canon(c, M) for k, c in A.items() if not spec.is_zero(c, M)}

    def _frob_pow(self, A, k, m):
        """A^(q^k) modulo pi^(m + k) for A known modulo pi^m."""
        for t in range(k):
            A = self._pow(A, self.spec.q, m + t + 1)
        return A

    def _scale_pi(self, A, j, M):
        spec = self.spec
        pj = spec.pow(spec.pi_raw(M), j, M)
        out = {k: spec.mul(c, pj, M) for k, c in A.items()}
        return {k: c for k, c in out.items() if not spec.is_zero(c, M)}

    def _div_pi(self, A, j, M):
        """A / pi^j for A modulo pi^M, returned modulo pi^(M - j)."""
        spec = self.spec
        out = {}
        for k, c in A.items():
            for _ in range(j):
                c = spec.div_pi(c, M)
            c = spec.canon(c, M - j)
            if not spec.is_zero(c, M - j):
                out[k] = c
        return out

    def _var(self, idx):
        return {1 << (self.bits * idx): self.spec.one}

    def _unpack(self, key):
        mask = (1 << self.bits) - 1
        return tuple((key >> (self.bits * i)) & mask for i in range(2 * self.n))

    def _ghost(self, comps, i, M):
        q = self.spec.q
        acc = {}
        for j in range(i + 1):
            acc = self._add(acc, self._scale_pi(self._pow(comps[j], q ** (i - j), M), j, M), M)
        return acc

    def _solve(self, kind):
        n, r = self.n, self.prec
        X = [self._var(i) for i in range(n)]
        Y = [self._var(n + i) for i in range(n)]
        sol = []
        for i in range(n):
            M = i + r
            gx, gy = self._ghost(X, i, M), self._ghost(Y, i, M)
            if kind == "add":
                target = self._add(gx, gy, M)
            elif kind == "mul":
                target = self._mul(gx, gy, M)
            else:
                target = self._add({}, gx, M, -1)
            for j, s in enumerate(sol):
                term = self._scale_pi(self._frob_pow(s, i - j, r), j, M)
                target = self._add(target, term, M, -1)
            sol.append(self._div_pi(target, i, M))
        return sol

    def evaluate(self, kind, x, y=None):
        """Evaluate at vectors over k (residue field) by plain substitution."""
        spec = self.spec
        polys = {"add": self.sum, "mul": self.prod, "neg": self.neg}[kind]
        vals = [spec.from_residue(c.coords) for c in x.components]
        if y is not None:
            vals += [spec.from_residue(c.coords) for c in y.components]
        else:
            vals += [spec.zero] * self.n
        out = []
        for P in polys:
            acc = spec.zero
            for key, c in P.items():
                t = c
                for v, e in zip(vals, self._unpack(key)):
                    if e:
                        t = spec.mul(t, spec.pow(v, e, 1), 1)
                acc = spec.add(acc, t, 1)
            out.append(ResidueElem(spec, spec.residue(acc)))
        return WittVec(spec, K, out)

    def term_count(self):
        return {kind: [len(P) for P in polys]
                for kind, polys in (("add", self.sum), ("mul", self.prod), ("neg", self.neg))}
