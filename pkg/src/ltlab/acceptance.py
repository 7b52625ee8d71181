"""The acceptance suites behind ``ltlab selftest`` and tests/test_acceptance.py.

Each suite runs its identities over the parameter grid with a fixed seed and
returns an ``Outcome``.  A suite passes when every check passes; a check
that raises counts as a failure carrying the error code.  Equalities are
exact within the (pi^n, Z^m) window of the compared series, and windows are
required to reach a stated minimum so that no comparison is vacuous.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import random
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .base_ring import BaseElem, BaseRingSpec, ResidueElem
from .coleman import ColemanContext
from .errors import LtlabError
from .lubin_tate import build, standard_frobenius
from .series import RESIDUE, LaurentSeries, LElem, RationalSeries

SEED = 20240611

SPECS = {
    "Z3": dict(p=3),
    "Q2e2": dict(p=2, e=2, eis_poly=[[2], [2], [1]]),
    "Z5": dict(p=5),
    "Q9": dict(p=3, fdeg=2, unram_poly=[1, 0, 1]),
}
# (spec name, Frobenius kind); "mult" is (1+Z)^p - 1, only over Z_p
GROUPS = [("Z3", "pi"), ("Z3", "mult"), ("Q2e2", "pi"), ("Z5", "pi"), ("Z5", "mult"), ("Q9", "pi")]
PI_PREC = 3
LAW_DEGREE = 20


@dataclass
class Outcome:
    number: int
    title: str
    checks: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return self.checks > 0 and not self.failures

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.checks} checks, {self.seconds:.1f}s)"

    def to_json(self):
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "checks": self.checks, "failures": self.failures[:20],
                "seconds": round(self.seconds, 1)}


class Recorder:
    """Collects check results for one suite."""

    def __init__(self, outcome):
        self.outcome = outcome

    def check(self, label, cond):
        self.outcome.checks += 1
        if not cond:
            self.outcome.failures.append(label)
        return bool(cond)

    def run(self, label, fn):
        """Evaluate ``fn`` as one check; an exception is a failure."""
        try:
            return self.check(label, fn())
        except LtlabError as exc:
            self.outcome.checks += 1
            self.outcome.failures.append(f"{label}: {exc.code}: {exc}")
        except (ArithmeticError, ValueError) as exc:
            self.outcome.checks += 1
            self.outcome.failures.append(f"{label}: {type(exc).__name__}: {exc}")
        return False


class Env:
    """Specs, formal groups and Coleman contexts shared by the suites."""

    def __init__(self, quick=False):
        self.quick = quick
        self.specs = {name: BaseRingSpec(**kw) for name, kw in SPECS.items()}
        self._groups = {}
        self._contexts = {}
        self._gate_errors = {}

    def reps(self, full, small=None):
        """Instance count: ``full`` normally, ``small`` under --quick."""
        return (small if small is not None else max(2, full // 4)) if self.quick else full

    def group(self, key, N=PI_PREC):
        k = (key, N)
        if k not in self._groups:
            name, kind = key
            S = self.specs[name]
            self._groups[k] = build(S, standard_frobenius(S, N, kind), LAW_DEGREE)
        return self._groups[k]

    def context(self, key, N=PI_PREC):
        """The Coleman context; the norm gate runs at build and its failure is cached."""
        k = (key, N)
        if k in self._gate_errors:
            raise self._gate_errors[k]
        if k not in self._contexts:
            try:
                self._contexts[k] = ColemanContext(self.group(key, N))
            except LtlabError as exc:
                self._gate_errors[k] = exc
                raise
        return self._contexts[k]


# -- random inputs ----------------------------------------------------------------

def rand_coords(rng, S, bound=None):
    bound = bound or S.p ** 3
    return tuple(rng.randrange(bound) for _ in range(S.d))


def rand_elem(rng, S, N):
    return BaseElem(S, rand_coords(rng, S), N)


def rand_unit_elem(rng, S, N):
    while True:
        c = rand_coords(rng, S)
        if S.is_unit(c):
            return BaseElem(S, c, N)


def rand_series(rng, S, N, lo, width):
    """A series known on [lo, lo + width) with random coefficients."""
    return LaurentSeries(S, [rand_coords(rng, S) for _ in range(width)], lo, lo + width, N)


def rand_poly(rng, S, N, lo, terms):
    """An exact Laurent polynomial."""
    return LaurentSeries(S, [rand_coords(rng, S) for _ in range(terms)], lo, None, N)


def rand_unit_series(rng, S, N, width, exact=False):
    """A unit of o_L[[Z]]."""
    f = rand_poly(rng, S, N, 0, width) if exact else rand_series(rng, S, N, 0, width)
    coeffs = [rand_unit_elem(rng, S, N).coords] + [f.coeff(k) for k in range(1, f.z_low + len(f.coeffs))]
    return LaurentSeries(S, coeffs, 0, f.z_high, N)


def rand_residue(rng, S, lo, terms, exact=True, width=None):
    """A nonzero residue Laurent series with unit lowest coefficient."""
    els = [e for e in S.residue_elements()]
    nz = [e for e in els if any(e)]
    coeffs = [rng.choice(nz)] + [rng.choice(els) for _ in range(terms - 1)]
    coeffs = [tuple(S.from_residue(c)) for c in coeffs]
    high = None if exact else lo + (width or terms)
    return LaurentSeries(S, coeffs, lo, high, 1, RESIDUE)


def agree(a, b, min_high=1):
    """a == b on their common window, which must reach Z^min_high."""
    d = a - b
    return d.is_zero() and d.high >= min_high


def q_over_pi(S, N):
    return BaseElem(S, (S.q,), N + 1).divide_by_pi_exact(1)


# -- criterion 1: formal group ------------------------------------------------------

def _tri_mul(S, A, B, D, N):
    out = {}
    for ka, ca in A.items():
        for kb, cb in B.items():
            k = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
            if sum(k) > D:
                continue
            t = S.mul(ca, cb, N)
            out[k] = S.add(out[k], t, N) if k in out else t
    return {k: c for k, c in out.items() if not S.is_zero(c, N)}


def _law_of(G, A, B, D, N):
    """F(A, B) for trivariate series A, B without constant terms, to total degree D."""
    S = G.spec
    one = {(0, 0, 0): S.one}
    apow, bpow = [one], [one]
    for _ in range(D):
        apow.append(_tri_mul(S, apow[-1], A, D, N))
        bpow.append(_tri_mul(S, bpow[-1], B, D, N))
    out = {}
    for (i, j), c in G.law.items():
        if i + j > D:
            continue
        term = _tri_mul(S, apow[i], bpow[j], D, N)
        for k, v in term.items():
            t = S.mul(v, c, N)
            out[k] = S.add(out[k], t, N) if k in out else t
    return {k: c for k, c in out.items() if not S.is_zero(c, N)}


def _law_series(G, u, v, W):
    """F(u(Z), v(Z)) modulo Z^W for u, v without constant terms."""
    S, N = G.spec, G.N
    acc = LaurentSeries.zero(S, N, W)
    upow = [LaurentSeries.one(S, N, W)]
    vpow = [LaurentSeries.one(S, N, W)]
    for _ in range(W):
        upow.append((upow[-1] * u).truncate(W))
        vpow.append((vpow[-1] * v).truncate(W))
    for (i, j), c in G.law.items():
        if i + j < W:
            acc = acc + (upow[i] * vpow[j]).scale(BaseElem(S, c, N))
    return acc.truncate(W)


def _mult_closed_form(S, a, N, W):
    """(1+Z)^a - 1 modulo Z^W for an integer a."""
    return LaurentSeries.from_ints(S, [0] + [math.comb(a, k) if a >= 0 else _neg_binom(a, k)
                                             for k in range(1, W)], N, 0, W)


def _neg_binom(a, k):
    num = 1
    for t in range(k):
        num *= a - t
    return num // math.factorial(k)


def suite_formal_group(env, rec):
    rng = random.Random(SEED + 1)
    D = LAW_DEGREE
    for key in GROUPS:
        G = env.group(key)
        S, N = G.spec, G.N
        tag = f"{key[0]}/{key[1]}"
        law = {(i, j, 0): c for (i, j), c in G.law.items() if i + j <= D}
        X = {(1, 0, 0): S.one}
        Y = {(0, 1, 0): S.one}
        W_ = {(0, 0, 1): S.one}
        rec.check(f"{tag}: F(X,0) = X", all(not S.is_zero(c, N) == (k == (1, 0)) for k, c in G.law.items()
                                            if k[1] == 0))
        rec.check(f"{tag}: F(0,Y) = Y", all(not S.is_zero(c, N) == (k == (0, 1)) for k, c in G.law.items()
                                            if k[0] == 0))
        rec.check(f"{tag}: F symmetric", all(S.is_zero(S.sub(c, G.law.get((j, i), S.zero), N), N)
                                             for (i, j), c in G.law.items()))
        if not env.quick or key == GROUPS[0]:
            lhs = _law_of(G, law, W_, D, N)
            inner = _law_of(G, Y, W_, D, N)
            rhs = _law_of(G, X, inner, D, N)
            diff = {k for k in set(lhs) | set(rhs)
                    if not S.is_zero(S.sub(lhs.get(k, S.zero), rhs.get(k, S.zero), N), N)}
            rec.check(f"{tag}: associativity to degree {D}", not diff)

        W = 12
        for _ in range(env.reps(20)):
            a, b = rand_elem(rng, S, N + 8), rand_elem(rng, S, N + 8)
            rec.run(f"{tag}: [a][b] = [ab]", lambda a=a, b=b: agree(
                G.mult(a, W).compose(G.mult(b, W)), G.mult(a * b, W), W))
            rec.run(f"{tag}: [a+b] = F([a],[b])", lambda a=a, b=b: agree(
                _law_series(G, G.mult(a, W), G.mult(b, W), W), G.mult(a + b, W), W))
            rec.run(f"{tag}: a g(Z) = g([a]) [a]'", lambda a=a: agree(
                G.g_lt(W).scale(a),
                G.g_lt(W).compose(G.mult(a, W + 1)) * G.mult(a, W + 1).derivative(), W))

        deg = 10
        log, exp = G.log_exp(deg)
        pi = BaseElem.uniformizer(S, N + 8)
        for a in (BaseElem(S, (2,), N + 8), pi, pi + 1):
            def log_mult(a=a):
                A = RationalSeries.from_series(G.mult(a, deg + 1), log.budget, deg + 1)
                lhs = log.compose(A)
                rhs = log * RationalSeries.from_series(LaurentSeries(S, [a.coords], 0, None, N),
                                                       log.budget, deg + 1)
                return lhs.equals(rhs, deg + 1) and len(lhs) >= deg + 1
            rec.run(f"{tag}: log([a]) = a log", log_mult)
        Zr = RationalSeries.from_series(LaurentSeries.monomial(S, 1, N), log.budget, deg + 1)
        rec.run(f"{tag}: exp(log Z) = Z", lambda: exp.compose(log).equals(Zr, deg + 1))
        rec.run(f"{tag}: log(exp Z) = Z", lambda: log.compose(exp).equals(Zr, deg + 1))
        rec.run(f"{tag}: log' = g_LT", lambda: log.derivative().equals(
            RationalSeries.from_series(G.g_lt(deg), log.budget, deg), deg))
        rec.check(f"{tag}: [pi]' = 0 mod pi", all(not S.is_unit(c) for c in G.frobenius.derivative().coeffs))

        if key[1] == "mult":
            W = 13
            gm_law = {(1, 0): 1, (0, 1): 1, (1, 1): 1}
            rec.check(f"{tag}: F = X + Y + XY", all(
                S.is_zero(S.sub(c, S.from_int(gm_law.get(k, 0), N), N), N)
                for k, c in G.law.items() if sum(k) < W) and all(k in G.law for k in gm_law))
            for a in [rng.randrange(-30, 30) for _ in range(env.reps(20))]:
                rec.run(f"{tag}: [{a}] = (1+Z)^{a} - 1", lambda a=a: agree(
                    G.mult(a, W), _mult_closed_form(S, a, N, W), W))
            rec.run(f"{tag}: g_LT = 1/(1+Z)", lambda: agree(
                G.g_lt(W), LaurentSeries.from_ints(S, [(-1) ** k for k in range(W)], N, 0, W), W))


# -- criterion 2: Coleman operators -------------------------------------------------

def coleman_width(q):
    """Input width for identities involving psi, which divides the Z-window by q."""
    return max(40, 8 * q)


def suite_coleman(env, rec):
    rng = random.Random(SEED + 2)
    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S, N, q = C.spec, C.N, C.q
        W = coleman_width(q)
        # the smallest window any identity below may return; psi keeps roughly W/q terms
        low = W // q - 5
        qp = q_over_pi(S, N)
        frob = C.frob
        Zs = LaurentSeries.monomial(S, 1, N)
        for _ in range(env.reps(20)):
            f = rand_series(rng, S, N, -2, W)
            f1 = rand_series(rng, S, N, -1, W)
            g = rand_series(rng, S, N, 0, W)
            rec.run(f"{tag}: psi_Col(phi f) = q f", lambda f=f: agree(C.psi_Col(C.phi(f, q * (3 * W // 4))), f.scale(q), W // 2))
            rec.run(f"{tag}: psi_L(phi f) = (q/pi) f", lambda f=f: agree(C.psi_L(C.phi(f, q * (3 * W // 4))), f.scale(qp), W // 2))
            rec.run(f"{tag}: psi_Col([pi] f) = Z psi_Col(f)", lambda f=f: agree(
                C.psi_Col(frob * f), C.psi_Col(f).shift(1), low))
            rec.run(f"{tag}: projection formula", lambda f=f1, g=g: agree(
                C.psi_L(C.phi(f) * g), f * C.psi_L(g), low - 1))
            rec.run(f"{tag}: phi psi d_inv = d_inv phi psi", lambda g=g: agree(
                C.phi(C.psi_L(C.group.inv_deriv(g))), C.group.inv_deriv(C.phi(C.psi_L(g))), low))

            u = rand_unit_series(rng, S, N, W)
            c = rand_unit_elem(rng, S, N + 8)
            rec.run(f"{tag}: N(f)([c]) = N(f([c]))", lambda u=u, c=c: agree(
                C.gamma_act(c, C.norm_N(u)), C.norm_N(C.gamma_act(c, u)), low))
            rec.run(f"{tag}: N(f) = f mod pi", lambda u=u: agree(
                C.norm_N(u).with_prec(1), u.with_prec(1), low))
            m = rng.randrange(1, N)
            h = rand_series(rng, S, N - m, 0, W).mul_pi(m)
            one = LaurentSeries.one(S, N)
            rec.run(f"{tag}: f = 1 mod pi^m => N(f) = 1 mod pi^(m+1)", lambda h=h, m=m: agree(
                C.norm_N(one + h).with_prec(m + 1), one.with_prec(m + 1).truncate(W), low))
            rec.run(f"{tag}: Delta(phi u) = pi phi(Delta u)", lambda u=u: agree(
                C.delta_LT(C.phi(u, W)), C.phi(C.delta_LT(u), W).mul_pi(1).with_prec(N), W // 2))
            rec.run(f"{tag}: psi_Col(Delta u) = pi Delta(N u)", lambda u=u: agree(
                C.psi_Col(C.delta_LT(u)), C.delta_LT(C.norm_N(u)).mul_pi(1).with_prec(N), low))
            uz = u.shift(-1)
            rec.run(f"{tag}: psi_Col(Delta(u/Z)) = pi Delta(N(u/Z))", lambda uz=uz: agree(
                C.psi_Col(C.delta_LT(uz)), C.delta_LT(C.norm_N(uz)).mul_pi(1).with_prec(N), low))

        rec.run(f"{tag}: N([pi]) = Z^q", lambda: (C.norm_N(frob) - Zs ** q).is_zero())
        G = C.group
        inv = (Zs * G.g_lt(W)).invert_unit()
        rec.run(f"{tag}: psi_Col(1/(Z g_LT)) = pi Delta(N(Z))", lambda: agree(
            C.psi_Col(inv), C.delta_LT(C.norm_Z, W).mul_pi(1).with_prec(N), low))


# -- criterion 3: norm gate ---------------------------------------------------------

def suite_norm_gate(env, rec):
    rng = random.Random(SEED + 3)
    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: gate at build ({exc.code}: {exc})", False)
            continue
        rec.check(f"{tag}: gate at build", True)
        S, N, q = C.spec, C.N, C.q
        Zs = LaurentSeries.monomial(S, 1, N)
        rec.run(f"{tag}: N([pi]) = Z^q", lambda: (C.norm_N(C.frob) - Zs ** q).is_zero())
        for _ in range(env.reps(20)):
            f = rand_unit_series(rng, S, N, 24)
            rec.run(f"{tag}: N(phi f) = f^q", lambda f=f: agree(C.norm_N(C.phi(f)), f ** q, 8))
            fx = rand_unit_series(rng, S, N, 4, exact=True)
            rec.run(f"{tag}: N(phi f) = f^q exactly", lambda f=fx: (C.norm_N(C.phi(f)) - f ** q).is_zero()
                    and C.norm_N(C.phi(f)).exact)


# -- criterion 4: Coleman lift ------------------------------------------------------

def suite_lift(env, rec):
    rng = random.Random(SEED + 4)
    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S, N = C.spec, C.N
        for _ in range(env.reps(20)):
            u = rand_residue(rng, S, rng.randrange(-2, 2), 4)
            g = C.coleman_lift(u)
            rec.run(f"{tag}: reduce(lift u) = u", lambda u=u, g=g: (g.reduce_mod_pi() - u).is_zero())
            rec.run(f"{tag}: lift(reduce g) = g", lambda g=g: (C.coleman_lift(g.reduce_mod_pi()) - g).is_zero())
            rec.run(f"{tag}: lift is N-fixed", lambda g=g: (C.norm_N(g) - g).is_zero())
            lo = rng.randrange(-2, 2)
            uw = rand_residue(rng, S, lo, 5)
            s1 = uw.lift_from_residue(N) + rand_poly(rng, S, N - 1, lo, 5).mul_pi(1)
            s2 = uw.lift_from_residue(N) + rand_poly(rng, S, N - 1, lo, 5).mul_pi(1)
            rec.run(f"{tag}: lift independent of the start", lambda u=uw, s1=s1, s2=s2: (
                C.coleman_lift(u, start=s1) - C.coleman_lift(u, start=s2)).is_zero())
        for _ in range(env.reps(10)):
            u = rand_residue(rng, S, rng.randrange(-1, 2), 3)
            v = rand_residue(rng, S, rng.randrange(-1, 2), 3)
            rec.run(f"{tag}: lift(uv) = lift(u) lift(v)", lambda u=u, v=v: (
                C.coleman_lift(u * v) - C.coleman_lift(u) * C.coleman_lift(v)).is_zero())


# -- criterion 5: residues and the pairing -----------------------------------------

def elem_eq(a, b):
    """a == b modulo the coarser precision, which must be at least one digit."""
    return min(a.prec, b.prec) >= 1 and a == b


def rand_variable(rng, S, N):
    """A new uniformizing variable Z = s(W), exact: W * unit, or W (1 + pi h)."""
    if rng.random() < 0.5:
        u = rand_unit_series(rng, S, N, 3, exact=True)
    else:
        h = rand_poly(rng, S, N - 1, 0, 3).mul_pi(1)
        u = LaurentSeries.one(S, N) + h
    return u.shift(1)


def suite_residue(env, rec):
    from .residue_omega import (DiffForm, change_variable, d_map, gamma_omega, pairing_bracket,
                                phi_omega, psi_omega, res)
    rng = random.Random(SEED + 5)
    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S, N, q = C.spec, C.N, C.q
        W = coleman_width(q)
        low = W // q - 5
        qp = q_over_pi(S, N)
        pi = BaseElem.uniformizer(S, N + 1)
        for _ in range(env.reps(20)):
            w = DiffForm(rand_series(rng, S, N, -3, W), C)
            c = rand_unit_elem(rng, S, N + 8)
            rec.run(f"{tag}: Res phi_Omega = (q/pi) Res", lambda w=w: elem_eq(
                res(phi_omega(w, W)), res(w) * qp))
            rec.run(f"{tag}: Res gamma = Res", lambda w=w, c=c: elem_eq(res(gamma_omega(c, w)), res(w)))
            rec.run(f"{tag}: Res psi_Omega = Res", lambda w=w: elem_eq(res(psi_omega(w)), res(w)))

            f = rand_series(rng, S, N, -2, W)
            psi_f = functools.cache(lambda f=f: C.psi_L(f))
            phi_f = functools.cache(lambda f=f: C.phi(f, W))
            psi_w = functools.cache(lambda w=w: psi_omega(w))
            phi_w = functools.cache(lambda w=w: phi_omega(w, W))
            rec.run(f"{tag}: Res(f psi_Omega(w)) = Res(phi(f) w)", lambda f=f, w=w, a=psi_w, b=phi_f: elem_eq(
                res(a().times(f)), res(w.times(b()))))
            for n in range(1, min(N, 3) + 1):
                rec.run(f"{tag}: [psi_L f, w] = [f, phi_Omega w] (n={n})", lambda f=f, w=w, n=n, a=psi_f, b=phi_w: (
                    pairing_bracket(a(), w, n) == pairing_bracket(f, b(), n)))
                rec.run(f"{tag}: [phi f, w] = [f, psi_Omega w] (n={n})", lambda f=f, w=w, n=n, a=phi_f, b=psi_w: (
                    pairing_bracket(a(), w, n) == pairing_bracket(f, b(), n)))

            g = rand_series(rng, S, N, -2, W)
            rec.run(f"{tag}: pi phi_Omega(dg) = d(phi g)", lambda g=g: agree(
                phi_omega(d_map(C, g), W).coeff.mul_pi(1).with_prec(N),
                C.phi(g, W + 1).derivative(), W // 2))
            rec.run(f"{tag}: gamma_Omega(c, dg) = d(gamma(c, g))", lambda g=g, c=c: agree(
                gamma_omega(c, d_map(C, g)).coeff, C.gamma_act(c, g).derivative(), W // 2))
            rec.run(f"{tag}: psi_Omega(dg) = pi d(psi_L g)", lambda g=g: agree(
                psi_omega(d_map(C, g)).coeff, C.psi_L(g).derivative().mul_pi(1).with_prec(N), low))

        for _ in range(5):
            s = rand_variable(rng, S, N)
            for _ in range(env.reps(4, 1)):
                w = DiffForm(rand_series(rng, S, N, -3, 20), C)
                rec.run(f"{tag}: Res independent of the variable", lambda w=w, s=s: elem_eq(
                    res(change_variable(w, s)), res(w)))


# -- criterion 6: psi-invariance of dlog of Coleman lifts --------------------------

def suite_psi_invariance(env, rec):
    from .residue_omega import dlog, psi_omega
    rng = random.Random(SEED + 6)
    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S, q = C.spec, C.q
        W = coleman_width(q)
        for _ in range(env.reps(5, 2)):
            u = rand_residue(rng, S, rng.randrange(-2, 2), 4)
            g = C.coleman_lift(u)
            rec.run(f"{tag}: psi_Omega(dlog g) = dlog g", lambda g=g: agree(
                psi_omega(dlog(C, g, W)).coeff, dlog(C, g, W).coeff, W // q - 5))


# -- criterion 7: Coates-Wiles ----------------------------------------------------

# dividing by r! and composing with exp_LT costs digits; these precisions keep
# at least two digits on every coefficient through t^7 (p = 2, e = 2 loses most)
CW_PREC = {"Z3": 6, "Z5": 6, "Q9": 6, "Q2e2": 16}
CW_DEGREE = 8


def lelem_eq(a, b):
    """a == b in L with at least one digit of absolute precision compared."""
    d = a - b
    return d.absprec >= 1 and d.is_zero()


def suite_coates_wiles(env, rec):
    rng = random.Random(SEED + 7)
    for key in (("Z3", "mult"), ("Z5", "mult")):
        tag = f"{key[0]}/{key[1]}"
        C = env.context(key)
        S, N = C.spec, C.N
        one_z = LaurentSeries.from_ints(S, [1, 1], N)
        rec.run(f"{tag}: psi^1(1+Z) = 1", lambda: lelem_eq(C.coates_wiles(one_z, 1), LElem.from_int(S, 1, N)))
        for r in (2, 3):
            rec.run(f"{tag}: psi^{r}(1+Z) = 0", lambda r=r: C.coates_wiles(one_z, r).is_zero()
                    and C.coates_wiles(one_z, r).absprec >= 1)
        for a in [rng.choice([k for k in range(-30, 31) if k]) for _ in range(env.reps(20))]:
            g = _mult_closed_form(S, a, N, 12) + 1
            rec.run(f"{tag}: psi^1((1+Z)^{a}) = {a}", lambda g=g, a=a: lelem_eq(
                C.coates_wiles(g, 1), LElem.from_int(S, a, N)))

    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        Nc = CW_PREC[key[0]]
        try:
            C = env.context(key, Nc)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S, D = C.spec, CW_DEGREE
        _, exp = C.group.log_exp(D)
        for _ in range(env.reps(4, 1)):
            u = rand_residue(rng, S, 0, 3)

            def expansion(u=u):
                g = C.coleman_lift(u)
                values = [C.coates_wiles(g, r, D) for r in range(1, D + 1)]
                delta = RationalSeries.from_series(C.delta_LT(g, D), exp.budget, D)
                lhs = delta.compose(exp)
                return len(lhs) >= D and all(
                    lelem_eq(lhs.coeffs[r - 1], values[r - 1].mul_int(r)) for r in range(1, D + 1))
            rec.run(f"{tag}: Delta(g)(exp t) = sum r psi^r t^(r-1) to t^{D - 1}", expansion)


# -- Witt helpers --------------------------------------------------------------------

WITT_LEN = 3


def rand_residue_elem(rng, S):
    return ResidueElem(S, tuple(rng.randrange(S.p) for _ in range(S.fdeg)))


def rand_witt(rng, S, domain, n, N=PI_PREC):
    """A random vector; Laurent components are exact polynomials with small poles."""
    from .witt import AL, K, KZ, OL, WittVec
    if domain == K:
        comps = [rand_residue_elem(rng, S) for _ in range(n)]
    elif domain == OL:
        comps = [rand_elem(rng, S, N) for _ in range(n)]
    elif domain == KZ:
        comps = [rand_residue(rng, S, rng.randrange(-2, 2), 3) for _ in range(n)]
    else:
        comps = [rand_poly(rng, S, N, rng.randrange(-1, 2), 3) for _ in range(n)]
    return WittVec(S, domain, comps)


def agree_known(a, b, floor=None):
    """a == b on a common window holding at least one exponent above ``floor``,
    the lowest exponent either side can have (default: their lowest terms)."""
    d = a - b
    if floor is None:
        lows = [s.z_low for s in (a, b) if s.coeffs]
        floor = min(lows) - 1 if lows else d.high - 1
    return d.is_zero() and d.high > floor


def witt_agree(x, y, floor=None):
    """Componentwise equality; Laurent components compare via ``agree_known``."""
    if x.domain != y.domain or x.n != y.n:
        return False
    for a, b in zip(x.components, y.components):
        if isinstance(a, LaurentSeries):
            if not agree_known(a, b, floor):
                return False
        elif isinstance(a, BaseElem):
            if not elem_eq(a, b):
                return False
        elif a != b:
            return False
    return True


def _random_lift(rng, S, domain, c, n):
    """A lift of a residue-side component that is not the Teichmueller one."""
    from .witt import K
    if domain == K:
        return BaseElem(S, S.from_residue(c.coords), n) + rand_elem(rng, S, n) * BaseElem.uniformizer(S, n)
    lo = c.z_low if c.coeffs else 0
    return c.lift_from_residue(n) + rand_poly(rng, S, n - 1, lo, 3).mul_pi(1)


# -- criterion 8: Witt vectors ------------------------------------------------------

def suite_witt(env, rec):
    from .witt import (AL, K, KZ, OL, UniversalPolys, WittVec, frobenius_w, from_ghost, ghost,
                       teichmuller_w, vshift, wp)
    rng = random.Random(SEED + 8)
    n = WITT_LEN
    for name, S in env.specs.items():
        N = PI_PREC
        polys = None

        def build(S=S):
            nonlocal polys
            polys = UniversalPolys(S, 4)
            return all(len(P) > 0 for P in polys.sum)
        rec.run(f"{name}: universal polynomials to length 4 are integral", build)
        for _ in range(env.reps(10) if polys else 0):
            x, y = rand_witt(rng, S, K, 4), rand_witt(rng, S, K, 4)
            for kind in ("add", "mul"):
                rec.run(f"{name}: pointwise {kind} = universal polynomial {kind}", lambda x=x, y=y, kind=kind:
                        x.__getattribute__("__" + kind + "__")(y) == polys.evaluate(kind, x, y))
            rec.run(f"{name}: pointwise neg = universal polynomial neg", lambda x=x: -x == polys.evaluate("neg", x))

        for domain in (OL, AL):
            for _ in range(env.reps(20)):
                x, y = rand_witt(rng, S, domain, n), rand_witt(rng, S, domain, n)
                rec.run(f"{name}/{domain}: ghost(x + y) = ghost x + ghost y", lambda x=x, y=y: all(
                    _same_value(a, b + c) for a, b, c in zip(ghost(x + y), ghost(x), ghost(y))))
                rec.run(f"{name}/{domain}: ghost(x y) = ghost x * ghost y", lambda x=x, y=y: all(
                    _same_value(a, b * c) for a, b, c in zip(ghost(x * y), ghost(x), ghost(y))))
                rec.run(f"{name}/{domain}: from_ghost(ghost x) = x", lambda x=x: witt_agree(
                    from_ghost(S, domain, ghost(x)), x))
                xf = rand_witt(rng, S, domain, n + 1)
                rec.run(f"{name}/{domain}: ghost(F x)_i = ghost(x)_(i+1)", lambda x=xf: all(
                    _same_value(a, b) for a, b in zip(ghost(frobenius_w(x)), ghost(x)[1:])))

        for domain in (K, KZ):
            for _ in range(env.reps(20)):
                if domain == K:
                    a, b = rand_residue_elem(rng, S), rand_residue_elem(rng, S)
                else:
                    a, b = rand_residue(rng, S, rng.randrange(-2, 2), 3), rand_residue(rng, S, 0, 2)
                rec.run(f"{name}/{domain}: [a][b] = [ab]", lambda a=a, b=b: (
                    teichmuller_w(S, domain, a, n) * teichmuller_w(S, domain, b, n)
                    == teichmuller_w(S, domain, a * b, n)))
                x = rand_witt(rng, S, domain, n)
                rec.run(f"{name}/{domain}: wp(tau x) = tau(wp x)", lambda x=x: wp(vshift(x)) == vshift(wp(x)))
                rec.run(f"{name}/{domain}: F is componentwise q-th power", lambda x=x: _frob_via_lift(
                    rng, S, x) == frobenius_w(x))


def _same_value(a, b):
    if isinstance(a, BaseElem):
        return elem_eq(a, b)
    return agree(a, b, 1) if not (a - b).exact else (a - b).is_zero()


def _frob_via_lift(rng, S, x):
    """Reduce the ghost-shift Frobenius of a random length-(n+1) lift of x."""
    from .witt import AL, K, OL, WittVec, frobenius_w
    n = x.n
    M = n + 1
    dom = OL if x.domain == K else AL
    lifts = [_random_lift(rng, S, x.domain, c, M) for c in x.components]
    lifts.append(rand_elem(rng, S, M) if dom == OL else rand_poly(rng, S, M, 0, 2))
    fx = frobenius_w(WittVec(S, dom, lifts))
    if x.domain == K:
        comps = [c.reduce_residue() for c in fx.components]
    else:
        comps = [c.reduce_mod_pi() for c in fx.components]
    return WittVec(S, x.domain, comps)


# -- criterion 9: s-maps ------------------------------------------------------------

def suite_s_map(env, rec):
    from .witt import AL, K, KZ, OL, WittVec, frobenius_w, s_map, w_map, w_map_with_lifts
    rng = random.Random(SEED + 9)
    for name, S in env.specs.items():
        N = PI_PREC
        for n in (2, 3):
            for _ in range(env.reps(20)):
                a, b = rand_elem(rng, S, n), rand_elem(rng, S, n)
                rec.run(f"{name}/o_L: s(a + b) = s(a) + s(b) (n={n})", lambda a=a, b=b, n=n: (
                    s_map(a + b, n) == s_map(a, n) + s_map(b, n)))
                rec.run(f"{name}/o_L: s(ab) = s(a) s(b) (n={n})", lambda a=a, b=b, n=n: (
                    s_map(a * b, n) == s_map(a, n) * s_map(b, n)))
                rec.run(f"{name}/o_L: w(s(a)) = a (n={n})", lambda a=a, n=n: elem_eq(w_map(s_map(a, n)), a))
                x = rand_witt(rng, S, K, n)
                rec.run(f"{name}/o_L: s(w(x)) = x (n={n})", lambda x=x, n=n: s_map(w_map(x), n) == x)
                lifts = [[_random_lift(rng, S, K, c, n) for c in x.components] for _ in range(2)]
                rec.run(f"{name}/k: w independent of the lift (n={n})", lambda x=x, L=lifts: elem_eq(
                    w_map_with_lifts(x, L[0]), w_map_with_lifts(x, L[1])))
            # injectivity: distinct inputs have distinct images
            size = S.q ** -(-n // S.e) if S.e == 1 else S.p ** n
            pool = _distinct_elems(rng, S, n, min(50, size))
            images = [s_map(a, n) for a in pool]
            rec.check(f"{name}/o_L: s injective on {len(pool)} inputs (n={n})", all(
                not (images[i] == images[j]) for i in range(len(pool)) for j in range(i)))

    Z3 = env.specs["Z3"]
    rec.run("Z3: s_2(3) = (0, 1)", lambda: s_map(BaseElem(Z3, (3,), 2), 2) == WittVec(
        Z3, K, [ResidueElem(Z3, (0,)), ResidueElem(Z3, (1,))]))
    rec.run("Z3: w_1((0, 1)) = 3 mod 9", lambda: elem_eq(w_map(WittVec(
        Z3, K, [ResidueElem(Z3, (0,)), ResidueElem(Z3, (1,))])), BaseElem(Z3, (3,), 2)))
    C3 = env.context(("Z3", "pi"))
    zr = LaurentSeries.residue(Z3, [1], 1)
    rec.run("Z3, [pi] = 3Z + Z^3: s_2(Z) = (Z, Z)", lambda: s_map(
        LaurentSeries.monomial(Z3, 1, 2), 2, C3) == WittVec(Z3, KZ, [zr, zr]))

    for key in GROUPS:
        tag = f"{key[0]}/{key[1]}"
        try:
            C = env.context(key)
        except LtlabError as exc:
            rec.check(f"{tag}: context build ({exc.code}: {exc})", False)
            continue
        S = C.spec
        for n in (2, 3):
            for _ in range(env.reps(20)):
                # at length 3 a pole of f becomes a pole of order q^2 and leaves no window
                lo = -1 if n == 2 else 0
                f, g = rand_series(rng, S, n, lo, 12), rand_series(rng, S, n, 0, 12)
                floor = lo * S.q ** (n - 1)
                rec.run(f"{tag}/A_L: s(f + g) = s(f) + s(g) (n={n})", lambda f=f, g=g, n=n, fl=floor: witt_agree(
                    s_map(f + g, n, C), s_map(f, n, C) + s_map(g, n, C), fl))
                rec.run(f"{tag}/A_L: s(f g) = s(f) s(g) (n={n})", lambda f=f, g=g, n=n, fl=floor: witt_agree(
                    s_map(f * g, n, C), s_map(f, n, C) * s_map(g, n, C), fl))
                rec.run(f"{tag}/A_L: s(f) recovers f mod pi (n={n})", lambda f=f, n=n: agree(
                    s_map(f, n, C).components[0], f.reduce_mod_pi(), 1))
                h = rand_series(rng, S, n, lo, 12)
                rec.run(f"{tag}/A_L: s distinguishes f != g mod pi^n (n={n})", lambda f=f, h=h, n=n: (
                    (f - h).is_zero() or any(not (u - v).is_zero() for u, v in zip(
                        s_map(f, n, C).components, s_map(h, n, C).components))))
                rec.run(f"{tag}/A_L: w(s(f)) = phi^(n-1)(f) (n={n})", lambda f=f, n=n, fl=floor: agree_known(
                    w_map(s_map(f, n, C)), _phi_iter(C, f, n - 1), fl))
                # poles make phi divide by powers of [pi], which empties the windows here
                x = WittVec(S, KZ, [rand_residue(rng, S, 0, 24, exact=False) for _ in range(n)])
                rec.run(f"{tag}/k((Z)): s(w(x)) = F^(n-1)(x) (n={n})", lambda x=x, n=n: witt_agree(
                    s_map(w_map(x), n, C), _frob_iter(x, n - 1), 0))
                lifts = [[_random_lift(rng, S, KZ, c, n) for c in x.components] for _ in range(2)]
                rec.run(f"{tag}/k((Z)): w independent of the lift (n={n})", lambda x=x, L=lifts: (
                    w_map_with_lifts(x, L[0]) - w_map_with_lifts(x, L[1])).is_zero())


def _distinct_elems(rng, S, n, count):
    seen, out = set(), []
    while len(out) < count:
        a = rand_elem(rng, S, n)
        if a.coords not in seen:
            seen.add(a.coords)
            out.append(a)
    return out


def _phi_iter(C, f, k):
    for _ in range(k):
        f = C.phi(f)
    return f


def _frob_iter(x, k):
    from .witt import frobenius_w
    for _ in range(k):
        x = frobenius_w(x)
    return x


# -- criterion 10: the decomposition Omega(x) + x^+ + x^- ---------------------------

def suite_omega(env, rec):
    from .witt import KZ, WittVec, as_series_vector, in_constants, in_minus, in_plus, omega_decompose
    rng = random.Random(SEED + 10)
    for name, S in env.specs.items():
        for n in (1, 2, 3):
            for _ in range(env.reps(30, 8)):
                x = WittVec(S, KZ, [rand_residue(rng, S, rng.randrange(-4, 1), rng.randrange(3, 8))
                                    for _ in range(n)])
                parts = functools.cache(lambda x=x: omega_decompose(x))
                rec.run(f"{name}: Omega(x) + x^+ + x^- = x (n={n})", lambda x=x, P=parts: (
                    P()[0] + P()[1] + P()[2] == x))
                rec.run(f"{name}: containments (n={n})", lambda P=parts: (
                    in_constants(P()[0]) and in_plus(P()[1]) and in_minus(P()[2])))
                e = WittVec(S, KZ, [LaurentSeries.residue(S, [rand_residue_elem(rng, S)]) for _ in range(n)])
                if e.is_zero():
                    e = WittVec(S, KZ, [LaurentSeries.residue(S, [1])] + e.components[1:])
                rec.run(f"{name}: moving a constant into x^+ breaks containment (n={n})", lambda x=x, e=e, P=parts: (
                    (P()[0] - e) + (P()[1] + e) + P()[2] == x and not in_plus(P()[1] + e)))
                rec.run(f"{name}: moving a constant into x^- breaks containment (n={n})", lambda x=x, e=e, P=parts: (
                    (P()[0] - e) + P()[1] + (P()[2] + e) == x and not in_minus(P()[2] + e)))


# -- criterion 11: the Schmid-Witt residue pairing ----------------------------------

AKA_UNITS = ([0, 1], [0, 1, 1], [0, 0, 1, 1])  # Z, Z(1+Z), Z^2(1+Z)


def suite_schmid_witt(env, rec):
    from .schmid_witt import PairingContext
    from .witt import KZ, WittVec, as_series_vector, constant_part, omega_decompose, vshift
    rng = random.Random(SEED + 11)
    for name, S in env.specs.items():
        try:
            C = env.context((name, "pi"))
        except LtlabError as exc:
            rec.check(f"{name}: context build ({exc.code}: {exc})", False)
            continue
        N = C.N
        pctx = {n: PairingContext(C, n) for n in range(1, N + 1)}
        Zr = LaurentSeries.residue(S, [1], 1)

        def rand_x(n):
            return WittVec(S, KZ, [rand_residue(rng, S, rng.randrange(-3, 1), 4) for _ in range(n)])

        def rand_a():
            return rand_residue(rng, S, rng.randrange(-1, 2), 3)

        for _ in range(env.reps(25)):
            n = rng.randrange(1, N + 1)
            P = pctx[n]
            x, y, a, b = rand_x(n), rand_x(n), rand_a(), rand_a()
            xl = WittVec(S, "A_L", [c + rand_poly(rng, S, n - 1, -3, 4).mul_pi(1)
                                    for c in P.lift_vector(x).components])
            al = P.lift_unit(a) * (LaurentSeries.one(S, n) + rand_poly(rng, S, n - 1, 0, 3).mul_pi(1))
            rec.run(f"{name}: (x, a) independent of the lifts (n={n})", lambda P=P, x=x, a=a, xl=xl, al=al: (
                P.residue_pair(x, a, xl, al) == P.residue_pair(x, a)))
            rec.run(f"{name}: (x, Z) = Omega(x) (n={n})", lambda P=P, x=x: (
                P.residue_pair(x, Zr) == constant_part(omega_decompose(x)[0])))
            rec.run(f"{name}: (x + y, a) = (x, a) + (y, a) (n={n})", lambda P=P, x=x, y=y, a=a: (
                P.residue_pair(x + y, a) == P.residue_pair(x, a) + P.residue_pair(y, a)))
            rec.run(f"{name}: (x, ab) = (x, a) + (x, b) (n={n})", lambda P=P, x=x, a=a, b=b: (
                P.residue_pair(x, a * b) == P.residue_pair(x, a) + P.residue_pair(x, b)))
            rec.run(f"{name}: ((x, a), Z) = (x, a) (n={n})", lambda P=P, x=x, a=a: (
                P.residue_pair(as_series_vector(P.residue_pair(x, a)), Zr) == P.residue_pair(x, a)))
            if n < N:
                rec.run(f"{name}: (tau x, a) = tau (x, a) (n={n})", lambda n=n, x=x, a=a: (
                    pctx[n + 1].residue_pair(vshift(x), a) == vshift(pctx[n].residue_pair(x, a))))

        for coeffs in AKA_UNITS:
            a = LaurentSeries.residue(S, coeffs)
            for _ in range(env.reps(8, 2)):
                n = rng.randrange(1, N + 1)
                comps = [(a ** rng.randrange(1, 4)) * rand_residue_elem(rng, S) for _ in range(n)]
                x = WittVec(S, KZ, comps)
                rec.run(f"{name}: (x, a) = 0 for x over a k[a], a = {coeffs} (n={n})", lambda n=n, x=x, a=a: (
                    pctx[n].residue_pair(x, a).is_zero()))


# -- criterion 12: command line ------------------------------------------------------

GOLDEN_DIR = Path(__file__).with_name("golden")
CONFIG_DIR = Path(__file__).with_name("configs")


def golden_cases():
    """The bundled (name, argv) pairs; ``{configs}`` expands to the shipped config directory."""
    doc = json.loads((GOLDEN_DIR / "cases.json").read_text(encoding="utf-8"))
    return [(c["name"], [a.replace("{configs}", str(CONFIG_DIR)) for a in c["args"]]) for c in doc["cases"]]


def run_cli(argv, timeout=120):
    return subprocess.run([sys.executable, "-m", "ltlab", *argv], capture_output=True, timeout=timeout)


def regenerate_golden():
    for name, argv in golden_cases():
        proc = run_cli(argv)
        if proc.returncode != 0:
            raise SystemExit(f"{name}: exit {proc.returncode}\n{proc.stdout.decode()}{proc.stderr.decode()}")
        (GOLDEN_DIR / f"{name}.json").write_bytes(proc.stdout)
        print(f"wrote {name}.json")


def suite_cli(env, rec):
    cases = golden_cases()
    rec.check("ten bundled commands", len(cases) == 10)
    for name, argv in cases:
        first, second = run_cli(argv), run_cli(argv)
        rec.check(f"{name}: exit 0", first.returncode == 0)
        rec.check(f"{name}: two runs byte-identical", first.stdout == second.stdout)
        golden = GOLDEN_DIR / f"{name}.json"
        rec.check(f"{name}: matches golden file", golden.exists() and golden.read_bytes() == first.stdout)

    from .cli import selftest_exit_code

    ok = run_cli(["selftest", "--only", "6", "--quick"], timeout=600)
    rec.check("selftest on a passing criterion exits 0", ok.returncode == 0 and json.loads(ok.stdout)["passed"])
    rec.check("a failing report maps to exit 1", selftest_exit_code({"passed": False}) == 1)
    rec.check("a passing report maps to exit 0", selftest_exit_code({"passed": True}) == 0)
    bad = run_cli(["selftest", "--only", "x"])
    rec.check("bad selftest selection exits 2 with an error document",
              bad.returncode == 2 and json.loads(bad.stdout)["error"] == "InvalidInput")
    bad = run_cli(["witt-ghost", "--config", str(CONFIG_DIR / "pi_z3.json"), "--components", "[[0],"])
    rec.check("malformed input exits 2 with an error document",
              bad.returncode == 2 and set(json.loads(bad.stdout)) == {"error", "detail"})


# -- driver ------------------------------------------------------------------------

CRITERIA = [
    (1, "formal group", suite_formal_group),
    (2, "Coleman operators", suite_coleman),
    (3, "norm gate", suite_norm_gate),
    (4, "Coleman lift", suite_lift),
    (5, "residues and pairing", suite_residue),
    (6, "psi-invariance of dlog", suite_psi_invariance),
    (7, "Coates-Wiles values", suite_coates_wiles),
    (8, "Witt vectors", suite_witt),
    (9, "s-map", suite_s_map),
    (10, "Omega decomposition", suite_omega),
    (11, "Schmid-Witt pairing", suite_schmid_witt),
    (12, "command line", suite_cli),
]


def run_criterion(number, env, title, suite):
    out = Outcome(number, title)
    start = time.perf_counter()
    try:
        suite(env, Recorder(out))
    except LtlabError as exc:
        out.failures.append(f"suite aborted: {exc.code}: {exc}")
    out.seconds = time.perf_counter() - start
    return out


def run_all(quick=False, only=None, report=None):
    """Run the selected criteria; ``report`` is called with each finished Outcome."""
    known = {num for num, _, _ in CRITERIA}
    if only is not None:
        unknown = set(only) - known
        if unknown:
            raise ValueError(f"unknown criteria {sorted(unknown)}")
    env = Env(quick=quick)
    outcomes = []
    for num, title, suite in CRITERIA:
        if only is not None and num not in only:
            continue
        out = run_criterion(num, env, title, suite)
        outcomes.append(out)
        if report:
            report(out)
    return {"passed": bool(outcomes) and all(o.passed for o in outcomes),
            "quick": quick, "seed": SEED,
            "criteria": [o.to_json() for o in outcomes]}


def main(argv=None):
    ap = argparse.ArgumentParser(prog="python -m ltlab.acceptance")
    ap.add_argument("--regenerate-golden", action="store_true", help="rewrite the CLI golden files")
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--only", help="comma-separated criterion numbers")
    args = ap.parse_args(argv)
    if args.regenerate_golden:
        regenerate_golden()
        return 0
    only = [int(k) for k in args.only.split(",")] if args.only else None
    report = run_all(args.quick, only, report=lambda o: print(o.line(), flush=True))
    from .cli import selftest_exit_code

    return selftest_exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
