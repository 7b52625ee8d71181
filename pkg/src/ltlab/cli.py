"""Command-line front end: JSON in, JSON out.

Every command reads a job config (base ring, Frobenius, precision block),
takes its inputs as JSON flags and prints one JSON document.  Integers are
written as decimal strings and keys are sorted, so equal inputs give equal
bytes.  Failures print {"error": code, "detail": text} and exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .base_ring import BaseElem, BaseRingSpec, ResidueElem
from .errors import DomainMismatch, InvalidSpec, LtlabError, WindowTooSmall
from .series import EXACT_PREC, RESIDUE, LaurentSeries

CONFIG_ENV = "LTLAB_CONFIG"
PRECISION_DEFAULTS = {"pi_prec": 4, "z_low": -8, "z_high": 12, "witt_len": 2, "r_max": 7}
COMMANDS = (
    "lt-build", "lt-mult", "lt-log", "coleman-psi", "coleman-norm", "coleman-lift",
    "coleman-delta", "coates-wiles", "nabla", "residue", "pairing-bracket",
    "witt-ghost", "witt-arith", "witt-smap", "witt-wmap", "witt-omega",
    "sw-brace", "sw-pair", "selftest",
)


class InvalidInput(LtlabError):
    code = "InvalidInput"


# -- job configuration ------------------------------------------------------------

class JobConfig:
    """Base ring, Frobenius polynomial and precision block of one invocation."""

    def __init__(self, doc):
        ring = doc.get("base_ring")
        if ring is None:
            raise InvalidSpec("config has no base_ring block")
        self.spec = BaseRingSpec.from_config(ring)
        self.frobenius_doc = doc.get("frobenius", {"kind": "pi"})
        self.law_degree = int(doc.get("law_degree", 20))
        prec = dict(PRECISION_DEFAULTS)
        prec.update({k: int(v) for k, v in (doc.get("precision") or {}).items()})
        self.pi_prec = prec["pi_prec"]
        self.z_low = prec["z_low"]
        self.z_high = prec["z_high"]
        self.witt_len = prec["witt_len"]
        self.r_max = prec["r_max"]
        if not 1 <= self.pi_prec <= self.spec.pi_prec_max:
            raise InvalidSpec(f"pi_prec must lie in [1, {self.spec.pi_prec_max}]")
        if not 1 <= self.witt_len <= self.pi_prec:
            raise InvalidSpec("witt_len must lie in [1, pi_prec]")
        if self.z_low >= self.z_high:
            raise InvalidSpec("z_low must be below z_high")
        self._group = None
        self._ctx = None

    def frobenius(self):
        from .lubin_tate import standard_frobenius

        doc = self.frobenius_doc
        if isinstance(doc, dict) and "kind" in doc:
            return standard_frobenius(self.spec, self.pi_prec, doc["kind"])
        coeffs = doc["coeffs"] if isinstance(doc, dict) else doc
        return LaurentSeries(self.spec, [parse_coords(self.spec, c) for c in coeffs], 0, None, self.pi_prec)

    def group(self):
        from .lubin_tate import FormalGroup

        if self._group is None:
            self._group = FormalGroup(self.spec, self.frobenius(), self.pi_prec, self.law_degree)
        return self._group

    def context(self):
        from .coleman import ColemanContext

        if self._ctx is None:
            self._ctx = ColemanContext(self.group())
        return self._ctx


def load_config(path):
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    if not path:
        raise InvalidSpec(f"no config given (use --config or {CONFIG_ENV})")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def merge_flags(doc, args):
    """Flags override the precision block of the config file."""
    doc = json.loads(json.dumps(doc))
    prec = doc.setdefault("precision", {})
    if args.precision is not None:
        prec["pi_prec"] = args.precision
    if args.zwindow is not None:
        try:
            lo, hi = args.zwindow.split(":")
            prec["z_low"], prec["z_high"] = int(lo), int(hi)
        except ValueError as exc:
            raise InvalidInput("--zwindow takes LOW:HIGH") from exc
    return doc


# -- input parsing ------------------------------------------------------------------

def parse_json_arg(text, name):
    if text is None:
        raise InvalidInput(f"missing --{name}")
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"--{name} is not valid JSON: {exc}") from exc


def parse_coords(spec, c):
    """An integer, a decimal string, a coordinate list or a {"coords"} object."""
    if isinstance(c, dict):
        c = c["coords"]
    if isinstance(c, (int, str)):
        c = [c]
    coords = tuple(int(x) for x in c)
    if len(coords) > spec.d:
        raise InvalidInput(f"at most {spec.d} coordinates per element")
    return coords + (0,) * (spec.d - len(coords))


def parse_elem(spec, doc, N):
    if isinstance(doc, dict) and "prec" in doc:
        N = min(N, int(doc["prec"]))
    return BaseElem(spec, parse_coords(spec, doc), N)


def parse_scalar(spec, doc):
    """A multiplier: exact unless the JSON gives a "prec"."""
    return parse_elem(spec, doc, EXACT_PREC)


def parse_residue(spec, doc):
    coords = parse_coords(spec, doc)
    return ResidueElem(spec, tuple(spec.residue(coords)))


def parse_series(spec, doc, N, residue=False):
    """A list (exact polynomial from Z^0) or {"coeffs", "z_low", "z_high", "pi_prec"}."""
    if isinstance(doc, list):
        doc = {"coeffs": doc}
    if not isinstance(doc, dict) or "coeffs" not in doc:
        raise InvalidInput("a series is a coefficient list or an object with coeffs")
    z_low = int(doc.get("z_low", 0))
    z_high = doc.get("z_high")
    z_high = None if z_high is None else int(z_high)
    coeffs = [parse_coords(spec, c) for c in doc["coeffs"]]
    if residue:
        coeffs = [tuple(spec.from_residue(spec.residue(c))) for c in coeffs]
        return LaurentSeries(spec, coeffs, z_low, z_high, 1, RESIDUE)
    n = min(N, int(doc.get("pi_prec", N)))
    return LaurentSeries(spec, coeffs, z_low, z_high, n)


def check_poles(f, z_low):
    if f.coeffs and f.z_low < z_low:
        raise WindowTooSmall(f"input has a pole of order {-f.z_low}, below z_low = {z_low}")
    return f


def parse_witt(spec, doc, domain, N, z_low):
    from .witt import AL, KZ, OL, WittVec

    comps = doc["components"] if isinstance(doc, dict) else doc
    if not isinstance(comps, list) or not comps:
        raise InvalidInput("a Witt vector is a non-empty component list")
    if domain == OL:
        out = [parse_elem(spec, c, N) for c in comps]
    elif domain == AL:
        out = [check_poles(parse_series(spec, c, N), z_low) for c in comps]
    elif domain == KZ:
        out = [check_poles(parse_series(spec, c, N, residue=True), z_low) for c in comps]
    else:
        out = [parse_residue(spec, c) for c in comps]
    return WittVec(spec, domain, out)


# -- output -----------------------------------------------------------------------

def series_out(f):
    return f.to_json()


def elems_out(xs):
    return [x.to_json() for x in xs]


# -- commands ---------------------------------------------------------------------

def cmd_lt_build(cfg, args):
    G = cfg.group()
    cfg.context()  # runs the norm gate
    hi = cfg.z_high
    law = [[str(i), str(j), [str(x) for x in c]] for (i, j), c in sorted(G.law.items()) if i + j < hi]
    return {
        "frobenius": series_out(G.frobenius),
        "law_degree_below": hi,
        "law": law,
        "law_pi_prec": G.N,
        "g_lt": series_out(G.g_lt(hi)),
        "norm_gate": "passed",
    }


def cmd_lt_mult(cfg, args):
    a = parse_scalar(cfg.spec, parse_json_arg(args.a, "a"))
    return {"a": a.to_json(), "mult": series_out(cfg.group().mult(a, cfg.z_high))}


def cmd_lt_log(cfg, args):
    degree = args.degree if args.degree is not None else cfg.z_high - 1
    log, exp = cfg.group().log_exp(degree)
    return {"degree": degree, "log": log.to_json(), "exp": exp.to_json()}


def _series_arg(cfg, args, name):
    return check_poles(parse_series(cfg.spec, parse_json_arg(getattr(args, name), name), cfg.pi_prec),
                       cfg.z_low)


def cmd_coleman_psi(cfg, args):
    ctx = cfg.context()
    f = _series_arg(cfg, args, "f")
    if args.apply_phi:
        f = ctx.phi(f, None if not f.exact or f.valuation_z() >= 0 else cfg.z_high)
    return {"input": series_out(f), "psi_L": series_out(ctx.psi_L(f)), "psi_Col": series_out(ctx.psi_Col(f))}


def cmd_coleman_norm(cfg, args):
    return {"norm": series_out(cfg.context().norm_N(_series_arg(cfg, args, "f")))}


def cmd_coleman_lift(cfg, args):
    u = parse_series(cfg.spec, parse_json_arg(args.u, "u"), 1, residue=True)
    check_poles(u, cfg.z_low)
    return {"lift": series_out(cfg.context().coleman_lift(u))}


def cmd_coleman_delta(cfg, args):
    f = _series_arg(cfg, args, "f")
    return {"delta": series_out(cfg.context().delta_LT(f, cfg.z_high))}


def cmd_coates_wiles(cfg, args):
    ctx = cfg.context()
    g = _series_arg(cfg, args, "g")
    rs = [args.r] if args.r is not None else list(range(1, cfg.r_max + 1))
    return {"values": [{"r": str(r), "value": ctx.coates_wiles(g, r, cfg.r_max).to_json()} for r in rs]}


def cmd_nabla(cfg, args):
    g = _series_arg(cfg, args, "g")
    a = parse_scalar(cfg.spec, parse_json_arg(args.a, "a"))
    return {"nabla": series_out(cfg.context().nabla(g, a, cfg.z_high))}


def cmd_residue(cfg, args):
    from .residue_omega import DiffForm, res

    w = DiffForm(_series_arg(cfg, args, "omega"), cfg.context())
    return {"residue": res(w).to_json()}


def cmd_pairing_bracket(cfg, args):
    from .residue_omega import DiffForm, pairing_bracket

    n = args.n if args.n is not None else cfg.witt_len
    f = _series_arg(cfg, args, "f")
    w = DiffForm(_series_arg(cfg, args, "omega"), cfg.context())
    return {"bracket": pairing_bracket(f, w, n).to_json()}


def _witt_arg(cfg, args, name, domain):
    return parse_witt(cfg.spec, parse_json_arg(getattr(args, name), name), domain, cfg.pi_prec, cfg.z_low)


def cmd_witt_ghost(cfg, args):
    from .witt import ghost

    x = _witt_arg(cfg, args, "components", args.domain or "o_L")
    return {"ghost": elems_out(ghost(x))}


def cmd_witt_arith(cfg, args):
    from .witt import witt_arith, witt_neg

    domain = args.domain or "k"
    x = _witt_arg(cfg, args, "x", domain)
    op = args.op or "add"
    if op == "neg":
        return {"op": op, "result": witt_neg(x).to_json()}
    y = _witt_arg(cfg, args, "y", domain)
    return {"op": op, "result": witt_arith(x, y, op).to_json()}


def cmd_witt_smap(cfg, args):
    from .witt import s_map

    n = args.n if args.n is not None else cfg.witt_len
    doc = parse_json_arg(args.b, "b")
    if (args.domain or "o_L") == "A_L":
        b = check_poles(parse_series(cfg.spec, doc, cfg.pi_prec), cfg.z_low)
        return {"smap": s_map(b, n, cfg.context()).to_json()}
    if args.domain not in (None, "o_L"):
        raise DomainMismatch("witt-smap takes --domain o_L or A_L")
    return {"smap": s_map(parse_elem(cfg.spec, doc, cfg.pi_prec), n).to_json()}


def cmd_witt_wmap(cfg, args):
    from .witt import w_map

    x = _witt_arg(cfg, args, "components", args.domain or "k")
    return {"wmap": w_map(x, args.n).to_json()}


def cmd_witt_omega(cfg, args):
    from .witt import constant_part, omega_decompose

    x = _witt_arg(cfg, args, "components", "k((Z))")
    c, p, m = omega_decompose(x)
    return {"constant": constant_part(c).to_json(), "plus": p.to_json(), "minus": m.to_json()}


def cmd_sw_brace(cfg, args):
    from .schmid_witt import PairingContext

    f = _witt_arg(cfg, args, "f", "A_L")
    h = _series_arg(cfg, args, "h")
    return {"brace": PairingContext(cfg.context(), f.n).brace(f, h).to_json()}


def cmd_sw_pair(cfg, args):
    from .schmid_witt import PairingContext

    x = _witt_arg(cfg, args, "x", "k((Z))")
    a = check_poles(parse_series(cfg.spec, parse_json_arg(args.a, "a"), 1, residue=True), cfg.z_low)
    return {"pair": PairingContext(cfg.context(), x.n).residue_pair(x, a).to_json()}


HANDLERS = {
    "lt-build": cmd_lt_build,
    "lt-mult": cmd_lt_mult,
    "lt-log": cmd_lt_log,
    "coleman-psi": cmd_coleman_psi,
    "coleman-norm": cmd_coleman_norm,
    "coleman-lift": cmd_coleman_lift,
    "coleman-delta": cmd_coleman_delta,
    "coates-wiles": cmd_coates_wiles,
    "nabla": cmd_nabla,
    "residue": cmd_residue,
    "pairing-bracket": cmd_pairing_bracket,
    "witt-ghost": cmd_witt_ghost,
    "witt-arith": cmd_witt_arith,
    "witt-smap": cmd_witt_smap,
    "witt-wmap": cmd_witt_wmap,
    "witt-omega": cmd_witt_omega,
    "sw-brace": cmd_sw_brace,
    "sw-pair": cmd_sw_pair,
}


def run(command, config_doc, args):
    """Execute one command and return its JSON document."""
    cfg = JobConfig(config_doc)
    out = HANDLERS[command](cfg, args)
    return {"command": command, "config": {"base_ring": cfg.spec.to_config(),
                                           "pi_prec": cfg.pi_prec, "z_low": cfg.z_low,
                                           "z_high": cfg.z_high, "witt_len": cfg.witt_len,
                                           "r_max": cfg.r_max},
            "result": out}


# -- argument parsing -------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="ltlab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="job config JSON (falls back to $LTLAB_CONFIG)")
    ap.add_argument("--precision", type=int, help="pi-adic precision, overrides the config")
    ap.add_argument("--zwindow", help="LOW:HIGH Z-window, overrides the config")
    ap.add_argument("--out", help="write the JSON document here instead of stdout")
    for name in ("a", "f", "g", "h", "u", "b", "x", "y", "omega", "components"):
        ap.add_argument(f"--{name}", help="JSON value or @file")
    ap.add_argument("--r", type=int, help="Coates-Wiles degree")
    ap.add_argument("--n", type=int, help="level or Witt length")
    ap.add_argument("--degree", type=int, help="series degree for lt-log")
    ap.add_argument("--op", choices=("add", "sub", "mul", "neg"))
    ap.add_argument("--domain", choices=("k", "k((Z))", "o_L", "A_L"))
    ap.add_argument("--apply-phi", action="store_true", help="coleman-psi: feed phi(f) instead of f")
    ap.add_argument("--quick", action="store_true", help="selftest: smaller instance counts")
    ap.add_argument("--only", help="selftest: comma-separated criterion numbers")
    return ap


def dump(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def selftest_exit_code(report):
    """0 when every selected criterion passed, 1 otherwise."""
    return 0 if report["passed"] else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        from .acceptance import run_all

        try:
            only = [int(k) for k in args.only.split(",")] if args.only else None
            report = run_all(quick=args.quick, only=only)
        except (ValueError, KeyError) as exc:
            emit(dump({"error": InvalidInput.code, "detail": f"--only: {exc}"}), args.out)
            return 2
        emit(dump(report), args.out)
        return selftest_exit_code(report)
    try:
        doc = merge_flags(load_config(args.config), args)
        out = run(args.command, doc, args)
    except LtlabError as exc:
        emit(dump({"error": exc.code, "detail": str(exc)}), args.out)
        return 2
    except (OSError, KeyError, ValueError, TypeError) as exc:
        emit(dump({"error": InvalidInput.code, "detail": f"{type(exc).__name__}: {exc}"}), args.out)
        return 2
    emit(dump(out), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
