"""Exact arithmetic in o_L / pi^N for a finite extension L of Q_p.

The ring of integers is presented as a two-step tower.  The unramified part is
R = Z_p[y]/(u(y)) with u monic and irreducible mod p; on top of it sits
R[x]/(E(x)) with E Eisenstein of degree e, so that x is the uniformizer pi.

A *raw* element is a tuple of ``e * fdeg`` Python ints; slot ``i * fdeg + j``
holds the coordinate of x^i y^j.  Raw elements at precision N are kept in a
canonical form: the coordinates of x^i are reduced modulo p^(k+1) when i < r
and modulo p^k otherwise, where N = k*e + r.  That set of residues is exactly
a system of representatives of o_L / pi^N, so equality of canonical tuples is
equality modulo pi^N.

Internal arithmetic runs modulo p^M with M = ceil(N/e) + 1.  The extra p-adic
digit is what makes a division by pi (which divides one coordinate by p) exact
without losing a digit the caller was promised.

Polynomials in the config (``unram_poly``, ``eis_poly``) are listed from the
constant term upwards.
"""

from __future__ import annotations

import json
import math
from .errors import InvalidSpec, NotAUnit, NotDivisible, SpecMismatch

INF = math.inf


# -- polynomials over F_p (lists of ints, constant term first) ---------------

def _fp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a, b, p):
    a = [c % p for c in a]
    _fp_trim(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, bc in enumerate(b):
            a[s + i] = (a[s + i] - c * bc) % p
        _fp_trim(a)
    return q, a


def _fp_mulmod(a, b, m, p):
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    return _fp_divmod(prod, m, p)[1]


def _fp_gcd(a, b, p):
    a = _fp_trim([c % p for c in a])
    b = _fp_trim([c % p for c in b])
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    return a


def _fp_irreducible(u, p):
    """Rabin-style check: gcd(u, y^(p^i) - y) = 1 for 1 <= i < deg u."""
    f = len(u) - 1
    if f <= 1:
        return True
    y = [0, 1]
    power = y
    for _ in range(1, f):
        # power <- power^p mod u
        result, base, k = [1], power, p
        while k:
            if k & 1:
                result = _fp_mulmod(result, base, u, p)
            base = _fp_mulmod(base, base, u, p)
            k >>= 1
        power = result
        diff = power + [0] * max(0, 2 - len(power))
        diff[1] -= 1
        if len(_fp_gcd(u, diff, p)) > 1:
            return False
    return True


def _vp(n, p):
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class BaseRingSpec:
    """Description of o_L together with raw arithmetic on its elements.

    Instances are immutable after construction and safe to share.
    """

    def __init__(self, p, e=1, fdeg=1, unram_poly=None, eis_poly=None, pi_prec_max=64):
        if p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
            raise InvalidSpec(f"p = {p} is not prime")
        if e < 1 or fdeg < 1:
            raise InvalidSpec("ramification index and residue degree must be >= 1")
        self.p, self.e, self.fdeg = p, e, fdeg
        self.d = e * fdeg
        self.q = p ** fdeg
        self.pi_prec_max = pi_prec_max

        if fdeg == 1:
            # degree one: the unramified part is Z_p itself
            u = [0, 1] if not unram_poly else list(unram_poly)
            if len(u) != 2 or u[-1] != 1:
                raise InvalidSpec("unram_poly must be monic of degree fdeg")
            self.unram_poly = []
        else:
            u = list(unram_poly or [])
            if len(u) != fdeg + 1 or u[-1] != 1:
                raise InvalidSpec("unram_poly must be monic of degree fdeg")
            if not _fp_irreducible([c % p for c in u], p):
                raise InvalidSpec("unram_poly is not irreducible mod p")
            self.unram_poly = u
        # y^fdeg = -(u_0 + ... + u_{f-1} y^{f-1})
        self._u_tail = [-c for c in u[:-1]] if fdeg > 1 else []

        if not eis_poly:
            eis_poly = [[-p], [1]]
        eis = [self._r_norm(c) for c in eis_poly]
        if len(eis) != e + 1 or eis[-1] != tuple([1] + [0] * (fdeg - 1)):
            raise InvalidSpec("eis_poly must be monic of degree e")
        self.eis_poly = [list(c) for c in eis]
        # Eisenstein shape, checked on the coefficients in R: every
        # non-leading coefficient is divisible by p, the constant one exactly once.
        for k, c in enumerate(eis[:-1]):
            if any(x % p for x in c):
                raise InvalidSpec("eis_poly is not Eisenstein")
        c0 = eis[0]
        if all((x // p) % p == 0 for x in c0):
            raise InvalidSpec("eis_poly constant term must have valuation exactly e")
        self._eis = eis[:-1]
        self._c0_over_p = tuple(x // p for x in c0)
        # x * T(x) = -c_0 with T(x) = c_1 + c_2 x + ... + x^(e-1)
        self._eis_T = eis[1:]

        self.zero = (0,) * self.d
        self.one = (1,) + (0,) * (self.d - 1)
        self._moduli = {}
        if e == 1:
            self._pi = tuple(-x for x in c0)
        else:
            pi = [0] * self.d
            pi[fdeg] = 1
            self._pi = tuple(pi)
        if self.valuation_raw(self.pi_raw(8), 8) != 1:
            raise InvalidSpec("the uniformizer does not have valuation 1")
        if self.valuation_raw(self.from_int(p, 4 * e + 4), 4 * e + 4) != e:
            raise InvalidSpec("v(p) differs from e")

    # -- config -------------------------------------------------------------

    @classmethod
    def from_config(cls, cfg):
        return cls(
            p=int(cfg["p"]),
            e=int(cfg.get("e", 1)),
            fdeg=int(cfg.get("fdeg", 1)),
            unram_poly=[int(c) for c in cfg.get("unram_poly") or []],
            eis_poly=[[int(c) for c in coeff] for coeff in cfg.get("eis_poly") or []],
            pi_prec_max=int(cfg.get("pi_prec_max", 64)),
        )

    def to_config(self):
        u = self.unram_poly if self.fdeg > 1 else []
        return {
            "p": self.p,
            "e": self.e,
            "fdeg": self.fdeg,
            "unram_poly": list(u),
            "eis_poly": [list(c) for c in self.eis_poly],
            "pi_prec_max": self.pi_prec_max,
        }

    def key(self):
        k = getattr(self, "_key", None)
        if k is None:
            k = self._key = json.dumps(self.to_config(), sort_keys=True)
        return k

    def __eq__(self, other):
        return isinstance(other, BaseRingSpec) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"BaseRingSpec(p={self.p}, e={self.e}, fdeg={self.fdeg})"

    # -- precision bookkeeping ------------------------------------------------

    def work_digits(self, N):
        """p-adic digits carried internally for pi-adic precision N."""
        return -(-N // self.e) + 1

    def moduli(self, N):
        m = self._moduli.get(N)
        if m is None:
            k, r = divmod(max(N, 0), self.e)
            f = self.fdeg
            m = tuple(self.p ** (k + 1 if i // f < r else k) for i in range(self.d))
            self._moduli[N] = m
        return m

    def pi_raw(self, N):
        return self.canon(self._pi, N)

    def canon(self, a, N):
        return tuple(x % m for x, m in zip(a, self.moduli(N)))

    # -- the unramified layer ------------------------------------------------

    def _r_norm(self, c):
        c = [int(x) for x in c] + [0] * self.fdeg
        return tuple(self._r_reduce(c)[: self.fdeg])

    def _r_reduce(self, c):
        """Reduce a y-polynomial modulo u(y) (no modular reduction)."""
        f = self.fdeg
        c = list(c)
        if f == 1:
            return [sum(c)] if c else [0]
        tail = self._u_tail
        for k in range(len(c) - 1, f - 1, -1):
            top = c[k]
            if top:
                c[k] = 0
                base = k - f
                for j in range(f):
                    c[base + j] += top * tail[j]
        return (c + [0] * f)[:f]

    def _r_mul(self, a, b):
        if self.fdeg == 1:
            return [a[0] * b[0]]
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self._r_reduce(prod)

    # -- raw o_L arithmetic ----------------------------------------------------

    def _fold(self, rows, mod):
        """rows[i] is the y-polynomial at x^i; reduce by E and u, return raw."""
        e, f = self.e, self.fdeg
        rows = [self._r_reduce(r) for r in rows]
        for i in range(len(rows) - 1, e - 1, -1):
            top = rows[i]
            if any(top):
                rows[i] = [0] * f
                base = i - e
                for k, ck in enumerate(self._eis):
                    t = self._r_mul(top, ck)
                    row = rows[base + k]
                    for j in range(f):
                        row[j] -= t[j]
        out = []
        for i in range(e):
            out.extend(x % mod for x in (rows[i] if i < len(rows) else [0] * f))
        return tuple(out)

    def from_int(self, n, N):
        return self.canon((n,) + (0,) * (self.d - 1), N)

    def add(self, a, b, N):
        return self.canon(tuple(x + y for x, y in zip(a, b)), N)

    def sub(self, a, b, N):
        return self.canon(tuple(x - y for x, y in zip(a, b)), N)

    def neg(self, a, N):
        return self.canon(tuple(-x for x in a), N)

    def scale_int(self, a, n, N):
        return self.canon(tuple(x * n for x in a), N)

    def mul(self, a, b, N):
        if self.d == 1:
            return ((a[0] * b[0]) % self.moduli(N)[0],)
        e, f = self.e, self.fdeg
        rows = [[0] * (2 * f - 1) for _ in range(2 * e - 1)]
        for i1 in range(e):
            ra = a[i1 * f:(i1 + 1) * f]
            if not any(ra):
                continue
            for i2 in range(e):
                rb = b[i2 * f:(i2 + 1) * f]
                if not any(rb):
                    continue
                row = rows[i1 + i2]
                for j1, x in enumerate(ra):
                    if x:
                        for j2, y in enumerate(rb):
                            row[j1 + j2] += x * y
        return self.canon(self._fold(rows, self.p ** self.work_digits(N)), N)

    def pow(self, a, k, N):
        result, base = self.from_int(1, N), a
        while k:
            if k & 1:
                result = self.mul(result, base, N)
            base = self.mul(base, base, N)
            k >>= 1
        return result

    def is_zero(self, a, N):
        return not any(x % m for x, m in zip(a, self.moduli(N)))

    def is_unit(self, a):
        return any(a[j] % self.p for j in range(self.fdeg))

    def div_pi(self, a, N):
        """Exact division by pi of an element known mod pi^N; result mod pi^(N-1)."""
        p, f, e = self.p, self.fdeg, self.e
        if self.is_unit(a):
            raise NotDivisible("element is a unit, not divisible by pi")
        mod = p ** self.work_digits(N)
        a0 = [a[j] // p for j in range(f)]
        # a0 / x = -(a0/p) * (c0/p)^(-1) * T(x)
        s = self._r_mul(a0, self._r_inv(self._c0_over_p, self.work_digits(N)))
        rows = [[0] * f for _ in range(e)]
        for k, tk in enumerate(self._eis_T):
            t = self._r_mul(s, list(tk))
            for j in range(f):
                rows[k][j] -= t[j]
        for i in range(1, e):
            for j in range(f):
                rows[i - 1][j] += a[i * f + j]
        out = []
        for r in rows:
            out.extend(x % mod for x in r)
        return self.canon(tuple(out), N - 1)

    def valuation_raw(self, a, N):
        """Largest k <= N with a in pi^k, via repeated exact division."""
        if self.is_zero(a, N):
            return INF
        k = 0
        while not self.is_unit(a):
            a = self.div_pi(a, N - k)
            k += 1
            if self.is_zero(a, N - k):
                return INF
        return k

    def _r_inv(self, c, M):
        """Inverse of a unit of R modulo p^M, by Newton iteration."""
        p = self.p
        mod = p ** M
        cbar = [x % p for x in c]
        if not any(cbar):
            raise NotAUnit("not a unit of the unramified ring")
        if self.fdeg == 1:
            return [pow(c[0], -1, mod)]
        b = self._fq_inv(tuple(cbar))
        b = list(b)
        prec = 1
        while prec < M:
            prec *= 2
            m = p ** min(prec, M)
            t = self._r_mul(list(c), b)
            t = [(-x) % m for x in t]
            t[0] = (t[0] + 2) % m
            b = [x % m for x in self._r_mul(b, t)]
        return [x % mod for x in b]

    def inv(self, a, N):
        """Inverse of a unit modulo pi^N."""
        if not self.is_unit(a):
            raise NotAUnit("element is divisible by pi")
        rinv = self.res_inv(self.residue(a))
        b = self.from_residue(rinv)
        prec = 1
        two = self.from_int(2, N)
        while prec < N:
            prec *= 2
            b = self.mul(b, self.sub(two, self.mul(a, b, N), N), N)
        return self.canon(b, N)

    # -- residue field F_q -------------------------------------------------------

    def residue(self, a):
        return tuple(a[j] % self.p for j in range(self.fdeg))

    def from_residue(self, c):
        return tuple(c) + (0,) * (self.d - self.fdeg)

    def res_add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def res_sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def res_neg(self, a):
        return tuple((-x) % self.p for x in a)

    def res_mul(self, a, b):
        return tuple(x % self.p for x in self._r_mul(list(a), list(b)))

    def res_pow(self, a, k):
        result, base = (1,) + (0,) * (self.fdeg - 1), a
        while k:
            if k & 1:
                result = self.res_mul(result, base)
            base = self.res_mul(base, base)
            k >>= 1
        return result

    def _fq_inv(self, a):
        if not any(a):
            raise NotAUnit("zero has no inverse in the residue field")
        return self.res_pow(a, self.q - 2)

    def res_inv(self, a):
        return self._fq_inv(tuple(x % self.p for x in a))

    def res_from_int(self, n):
        return (n % self.p,) + (0,) * (self.fdeg - 1)

    def residue_elements(self):
        """All q elements of F_q, in lexicographic coordinate order."""
        out = [()]
        for _ in range(self.fdeg):
            out = [t + (c,) for t in out for c in range(self.p)]
        return out

    def teichmuller(self, c, N):
        """Root of X^q - X reducing to c, by Newton iteration."""
        c = tuple(x % self.p for x in c)
        if not any(c):
            return self.zero
        q = self.q
        w = self.from_residue(c)
        prec = 1
        while prec < N:
            prec *= 2
            wq1 = self.pow(w, q - 1, N)
            num = self.sub(self.mul(wq1, w, N), w, N)
            den = self.sub(self.scale_int(wq1, q, N), self.one, N)
            w = self.sub(w, self.mul(num, self.inv(den, N), N), N)
        return self.canon(w, N)

    # -- dense polynomial products over o_L ------------------------------------

    def series_mul(self, A, B, N, limit=None):
        """Product of coefficient lists, by Kronecker substitution.

        ``A`` and ``B`` are lists of canonical raw elements at precision N.
        The result has ``len(A) + len(B) - 1`` entries, or ``limit`` if given.
        """
        if limit is not None:
            A, B = A[:limit], B[:limit]
        if not A or not B:
            return []
        la, lb = len(A), len(B)
        out_len = la + lb - 1 if limit is None else min(la + lb - 1, limit)
        M = self.work_digits(N)
        mod = self.p ** M
        e, f = self.e, self.fdeg
        count = min(la, lb) * self.d
        nb = ((mod - 1) ** 2 * count).bit_length() // 8 + 1
        if self.d == 1:
            ba = b"".join(c[0].to_bytes(nb, "little") for c in A)
            bb = b"".join(c[0].to_bytes(nb, "little") for c in B)
            prod = (int.from_bytes(ba, "little") * int.from_bytes(bb, "little"))
            raw = prod.to_bytes(nb * (la + lb), "little")
            m0 = self.moduli(N)[0]
            return [(int.from_bytes(raw[k * nb:(k + 1) * nb], "little") % m0,) for k in range(out_len)]
        if e == 1:
            return self._series_mul_unramified(A, B, N, out_len, mod, count)
        w = 2 * f - 1
        bs = (2 * e - 1) * w

        def pack(C):
            buf = bytearray(len(C) * bs * nb)
            for t, c in enumerate(C):
                base = t * bs
                for i in range(e):
                    for j in range(f):
                        x = c[i * f + j] % mod
                        if x:
                            off = (base + i * w + j) * nb
                            buf[off:off + nb] = x.to_bytes(nb, "little")
            return int.from_bytes(buf, "little")

        prod = pack(A) * pack(B)
        raw = prod.to_bytes(nb * bs * (la + lb), "little")
        out = []
        for t in range(out_len):
            base = t * bs
            rows = []
            for i in range(2 * e - 1):
                off = (base + i * w) * nb
                rows.append([int.from_bytes(raw[off + j * nb:off + (j + 1) * nb], "little") for j in range(w)])
            out.append(self.canon(self._fold(rows, mod), N))
        return out


    def _series_mul_unramified(self, A, B, N, out_len, mod, count):
        """series_mul for e = 1: one Kronecker product per pair of y-coordinates,
        then y^f = -(u_0 + ... + u_(f-1) y^(f-1)) applied to whole packed rows."""
        f = self.fdeg
        tail = [t % mod for t in self._u_tail]
        # each reduction step multiplies the slot bound by at most 1 + f * mod
        bound = (mod - 1) ** 2 * count * f * (1 + f * mod) ** f
        nb = bound.bit_length() // 8 + 1

        def pack(C, j):
            return int.from_bytes(b"".join((c[j] % mod).to_bytes(nb, "little") for c in C), "little")

        pa = [pack(A, j) for j in range(f)]
        pb = [pack(B, j) for j in range(f)]
        rows = [0] * (2 * f - 1)
        for i in range(f):
            for j in range(f):
                rows[i + j] += pa[i] * pb[j]
        for k in range(2 * f - 2, f - 1, -1):
            top = rows[k]
            if top:
                for j in range(f):
                    if tail[j]:
                        rows[k - f + j] += tail[j] * top
        length = nb * (len(A) + len(B))
        raws = [rows[j].to_bytes(length, "little") for j in range(f)]
        moduli = self.moduli(N)
        out = []
        for t in range(out_len):
            off = t * nb
            out.append(tuple(int.from_bytes(raws[j][off:off + nb], "little") % moduli[j] for j in range(f)))
        return out


class ResidueElem:
    """An element of the residue field F_q."""

    __slots__ = ("spec", "coords")

    def __init__(self, spec, coords):
        if isinstance(coords, int):
            coords = (coords,)
        coords = tuple(coords) + (0,) * (spec.fdeg - len(coords))
        self.spec = spec
        self.coords = tuple(int(x) % spec.p for x in coords[: spec.fdeg])

    def _check(self, other):
        if isinstance(other, int):
            return ResidueElem(self.spec, (other,))
        if not isinstance(other, ResidueElem):
            return NotImplemented
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecMismatch("residue elements over different rings")
        return other

    def __add__(self, other):
        other = self._check(other)
        return ResidueElem(self.spec, self.spec.res_add(self.coords, other.coords))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return ResidueElem(self.spec, self.spec.res_sub(self.coords, other.coords))

    def __neg__(self):
        return ResidueElem(self.spec, self.spec.res_neg(self.coords))

    def __mul__(self, other):
        other = self._check(other)
        return ResidueElem(self.spec, self.spec.res_mul(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return ResidueElem(self.spec, self.spec.res_pow(self.coords, k))

    def inverse(self):
        return ResidueElem(self.spec, self.spec.res_inv(self.coords))

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"ResidueElem({list(self.coords)})"

    def to_json(self):
        return [str(x) for x in self.coords]


class BaseElem:
    """An element of o_L known modulo pi^prec."""

    __slots__ = ("spec", "coords", "prec")

    def __init__(self, spec, coords, prec):
        if isinstance(coords, int):
            coords = (coords,)
        coords = tuple(int(x) for x in coords) + (0,) * (spec.d - len(coords))
        if len(coords) != spec.d:
            raise InvalidSpec(f"expected {spec.d} coordinates")
        self.spec = spec
        self.prec = prec
        self.coords = spec.canon(coords, prec)

    @classmethod
    def from_int(cls, spec, n, prec):
        return cls(spec, (n,), prec)

    @classmethod
    def uniformizer(cls, spec, prec):
        return cls(spec, spec.pi_raw(prec), prec)

    def _check(self, other):
        if isinstance(other, int):
            return BaseElem(self.spec, (other,), self.prec)
        if not isinstance(other, BaseElem):
            return NotImplemented
        if other.spec is not self.spec and other.spec != self.spec:
            raise SpecMismatch("elements over different base rings")
        return other

    def _binary(self, other, op):
        other = self._check(other)
        if other is NotImplemented:
            return other
        n = min(self.prec, other.prec)
        return BaseElem(self.spec, op(self.coords, other.coords, n), n)

    def __add__(self, other):
        return self._binary(other, self.spec.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, self.spec.sub)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        return self._binary(other, self.spec.mul)

    __rmul__ = __mul__

    def __neg__(self):
        return BaseElem(self.spec, self.spec.neg(self.coords, self.prec), self.prec)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return BaseElem(self.spec, self.spec.pow(self.coords, k, self.prec), self.prec)

    def inverse(self):
        return BaseElem(self.spec, self.spec.inv(self.coords, self.prec), self.prec)

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.spec.is_zero(self.spec.sub(self.coords, other.coords, min(self.prec, other.prec)),
                                 min(self.prec, other.prec))

    def __hash__(self):
        raise TypeError("BaseElem equality depends on precision; not hashable")

    def __repr__(self):
        return f"BaseElem({list(self.coords)}, prec={self.prec})"

    def is_zero(self):
        return self.spec.is_zero(self.coords, self.prec)

    def is_unit(self):
        return self.spec.is_unit(self.coords)

    def valuation(self):
        return self.spec.valuation_raw(self.coords, self.prec)

    def divide_by_pi_exact(self, k):
        """Return b with pi^k * b = self, known modulo pi^(prec - k)."""
        a, n = self.coords, self.prec
        for _ in range(k):
            if self.spec.is_zero(a, n):
                a, n = self.spec.zero, n - 1
                continue
            a = self.spec.div_pi(a, n)
            n -= 1
        return BaseElem(self.spec, a, n)

    def reduce_residue(self):
        return ResidueElem(self.spec, self.spec.residue(self.coords))

    def to_json(self):
        return {"coords": [str(x) for x in self.coords], "prec": self.prec}

    @classmethod
    def from_json(cls, spec, doc):
        return cls(spec, [int(x) for x in doc["coords"]], int(doc["prec"]))


def teichmuller_lift(c, N):
    """The unique root of X^q - X in o_L/pi^N reducing to ``c``."""
    spec = c.spec
    return BaseElem(spec, spec.teichmuller(c.coords, N), N)


def reduce_residue(a):
    return a.reduce_residue()


def arith(a, b, kind):
    ops = {"add": BaseElem.__add__, "sub": BaseElem.__sub__, "mul": BaseElem.__mul__}
    if kind not in ops:
        raise ValueError(f"unknown operation {kind!r}")
    return ops[kind](a, b)


def valuation(a):
    return a.valuation()


def divide_by_pi_exact(a, k):
    return a.divide_by_pi_exact(k)
