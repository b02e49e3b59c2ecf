"""Command-line front end.

Usage: ``lorentz-entropy COMMAND key=value ...`` with ``format=csv|json`` and
``output=PATH`` recognised by every command.  Infinite exponents are written
``inf``.  Errors go to stderr as one JSON record and give a nonzero exit.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from .cells import EmbeddingSpec, NotAvailable, regime_of
from .covnum import covering_profile, packing_profile
from .entropy import envelope_lorentz, upper_identity
from .interp import InterpPair, k_functional_l1_linf, k_functional_numeric
from .opnorm import embedding_norm_envelope, embedding_norm_exact, embedding_norm_numeric
from .seqcore import LorentzParams, aoki_rolewicz_p, certified_quasi_constant, lorentz_norm, parse_extended
from .sparse import sigma_s, sigma_sup, trunc_u, u_sup
from .verify import render, run_suites, suite_names
from .volume import (
    N_CAP,
    entropy_vol_lower,
    exact_volume,
    lorentz_ball_volume_mc,
    rv,
    rv_value,
    volume_envelope,
)

SCHEMA = 1


class UsageError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    params: dict
    output: str = "-"
    format: str = "csv"
    raw: dict = field(default_factory=dict)


# parameter kinds
EXT = parse_extended


def _int(v: str) -> int:
    f = float(v)
    if not f.is_integer():
        raise ValueError(f"expected an integer, got {v!r}")
    return int(f)


def _vector(v: str) -> list[float]:
    return [float(a) for a in v.split(",") if a.strip()]


KINDS: dict[str, Callable] = {
    "p": EXT, "u": EXT, "q": EXT, "v": EXT,
    "p0": EXT, "u0": EXT, "p1": EXT, "u1": EXT,
    "n": _int, "k": _int, "s": _int, "kmin": _int, "kmax": _int,
    "samples": _int, "seed": _int, "candidates": _int,
    "delta": float, "t": float, "theta": float,
    "x": _vector, "method": str, "suite": str,
}

COMMANDS = {
    "norm": ({"p", "u", "x"}, set()),
    "opnorm": ({"p", "u", "q", "v", "n"}, {"method", "seed"}),
    "sigma": ({"q", "v", "s"}, {"x", "p", "u", "n", "method", "seed"}),
    "usup": ({"p", "u", "q", "v", "n", "s"}, {"method", "seed"}),
    "envelope": ({"p", "u", "q", "v", "n"}, {"kmin", "kmax"}),
    "volume": ({"p", "u", "n"}, {"samples", "seed"}),
    "entropy-bounds": ({"p", "u", "q", "v", "n"}, {"kmax", "samples", "seed", "candidates"}),
    "kfunc": ({"x", "t"}, {"p0", "u0", "p1", "u1"}),
    "verify": (set(), {"suite", "seed"}),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_config(argv) -> ExperimentConfig:
    ap = _Parser(prog="lorentz-entropy", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("params", nargs="*", help="key=value pairs")
    ns = ap.parse_args(argv)
    raw = {}
    for tok in ns.params:
        if "=" not in tok:
            raise UsageError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        if key in raw:
            raise UsageError(f"parameter {key!r} given twice")
        raw[key] = val
    fmt = raw.pop("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    output = raw.pop("output", "-")
    required, optional = COMMANDS[ns.command]
    unknown = set(raw) - required - optional
    if unknown:
        raise UsageError(f"unknown parameters for {ns.command}: {', '.join(sorted(unknown))}")
    missing = required - set(raw)
    if missing:
        raise UsageError(f"missing parameters for {ns.command}: {', '.join(sorted(missing))}")
    params = {}
    for key, val in raw.items():
        try:
            params[key] = KINDS[key](val)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {exc}") from None
    return ExperimentConfig(ns.command, params, output, fmt, dict(raw))


# -- formatting -------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return _cell(v)
    return v


class Writer:
    """Single writer for CSV (with ``#`` metadata) or JSON lines."""

    def __init__(self, stream, fmt: str, meta: dict):
        self.stream, self.fmt, self.meta = stream, fmt, meta
        self.columns = None
        # side channel for callers that want the raw results (not written)
        self.extras: dict = {}

    def header(self, columns):
        self.columns = list(columns)
        if self.fmt == "csv":
            self.stream.write(f"# schema={SCHEMA}\n")
            for key in sorted(self.meta):
                self.stream.write(f"# {key}={self.meta[key]}\n")
            self.stream.write(",".join(self.columns) + "\n")

    def row(self, values):
        if self.fmt == "csv":
            self.stream.write(",".join(_cell(values[c]) for c in self.columns) + "\n")
        else:
            self.stream.write(json.dumps({c: _json_value(values[c]) for c in self.columns}) + "\n")


# -- commands ---------------------------------------------------------------

def _spec(P) -> EmbeddingSpec:
    return EmbeddingSpec.of(P["p"], P["u"], P["q"], P["v"], P["n"])


def cmd_norm(P, w: Writer) -> bool:
    w.header(["n", "value"])
    x = P["x"]
    w.row({"n": len(x), "value": lorentz_norm(x, LorentzParams(P["p"], P["u"]))})
    return True


def cmd_opnorm(P, w: Writer) -> bool:
    spec = _spec(P)
    method = P.get("method", "exact")
    if method == "exact":
        r = embedding_norm_exact(spec)
        if r is None:
            raise NotAvailable("no closed form for this embedding; use method=numeric or envelope")
        value, kind = r.value, r.kind
    elif method == "numeric":
        r = embedding_norm_numeric(spec, seed=P.get("seed", 0))
        value, kind = r.value, r.kind
    elif method == "envelope":
        value, kind = embedding_norm_envelope(spec).value, "envelope"
    else:
        raise UsageError("method must be exact, numeric or envelope")
    w.header(["n", "value", "kind", "case"])
    w.row({"n": spec.n, "value": value, "kind": kind, "case": spec.case})
    return True


def _method(P, default="envelope"):
    m = P.get("method", default)
    if m not in ("envelope", "numeric"):
        raise UsageError("method must be envelope or numeric")
    return m


def cmd_sigma(P, w: Writer) -> bool:
    tgt = LorentzParams(P["q"], P["v"])
    if "x" in P:
        x = P["x"]
        w.header(["n", "s", "sigma", "trunc_u"])
        s = P["s"]
        tu = trunc_u(x, s, tgt) if s >= 1 else None
        w.row({"n": len(x), "s": s, "sigma": sigma_s(x, s, tgt), "trunc_u": tu})
        return True
    if not {"p", "u", "n"} <= set(P):
        raise UsageError("sigma needs x=... or the source p, u and n")
    spec = _spec(P)
    m = _method(P)
    w.header(["n", "s", "value", "method", "case"])
    w.row({"n": spec.n, "s": P["s"], "value": sigma_sup(spec, P["s"], m), "method": m, "case": spec.case})
    return True


def cmd_usup(P, w: Writer) -> bool:
    spec = _spec(P)
    m = _method(P)
    w.header(["n", "s", "value", "method", "case"])
    w.row({"n": spec.n, "s": P["s"], "value": u_sup(spec, P["s"], m), "method": m, "case": spec.case})
    return True


def cmd_envelope(P, w: Writer) -> bool:
    spec = _spec(P)
    kmin, kmax = P.get("kmin", 1), P.get("kmax", 2 * spec.n)
    if kmin < 1 or kmax < kmin:
        raise UsageError("need 1 <= kmin <= kmax")
    w.header(["k", "value", "case", "regime"])
    for k in range(kmin, kmax + 1):
        e = envelope_lorentz(spec, k)
        w.row({"k": k, "value": e.value, "case": e.case_tag, "regime": e.regime})
    return True


def cmd_volume(P, w: Writer) -> bool:
    lp = LorentzParams(P["p"], P["u"])
    n, samples, seed = P["n"], P.get("samples", 200_000), P.get("seed", 0)
    if n < 1 or samples < 1:
        raise UsageError("need n >= 1 and samples >= 1")
    if n > N_CAP:
        warnings.warn(f"n={n} exceeds the Monte Carlo cap {N_CAP}; acceptance rates may be tiny")
    est = lorentz_ball_volume_mc(lp, n, samples, seed)
    w.header(["n", "exact", "mc", "std_error", "hits", "samples", "proposal", "envelope"])
    w.row({"n": n, "exact": exact_volume(lp, n), "mc": est.mean, "std_error": est.std_error,
           "hits": est.hits, "samples": samples, "proposal": est.proposal,
           "envelope": volume_envelope(lp, n) ** n})
    return True


def cmd_entropy_bounds(P, w: Writer) -> bool:
    spec = _spec(P)
    n = spec.n
    kmax = P.get("kmax", 3 * n)
    seed = P.get("seed", 0)
    if kmax < 1:
        raise UsageError("kmax must be >= 1")
    packs = packing_profile(spec, kmax, P.get("candidates", 20_000), seed)
    covers = covering_profile(spec, kmax)
    r = rv_value(rv(spec.source, spec.target, n, samples=P.get("samples", 200_000), seed=seed))
    exact = embedding_norm_exact(spec)
    norm = exact.value if exact is not None else embedding_norm_numeric(spec, seed=seed).value
    p_ar = aoki_rolewicz_p(certified_quasi_constant(spec.source, n, seed)[0])
    w.meta["norm_kind"] = "exact" if exact is not None else "numeric"
    w.header(["k", "vol_lower", "packing_lower", "covering_upper", "identity_upper",
              "envelope", "case", "regime"])
    for k in range(1, kmax + 1):
        w.row({"k": k, "vol_lower": entropy_vol_lower(k, n, r), "packing_lower": packs[k - 1].lower,
               "covering_upper": covers[k - 1].upper, "identity_upper": norm * upper_identity(p_ar, n, k),
               "envelope": envelope_lorentz(spec, k).value, "case": spec.case, "regime": regime_of(k, n)})
    return True


def cmd_kfunc(P, w: Writer) -> bool:
    x, t = P["x"], P["t"]
    n = len(x)
    keys = ("p0", "u0", "p1", "u1")
    given = [k for k in keys if k in P]
    if given and len(given) != 4:
        raise UsageError("give all of p0, u0, p1, u1 or none")
    w.header(["n", "t", "value", "method"])
    if not given:
        w.row({"n": n, "t": t, "value": k_functional_l1_linf(x, t), "method": "closed-form"})
        return True
    pair = InterpPair(LorentzParams(P["p0"], P["u0"]), LorentzParams(P["p1"], P["u1"]), n)
    res = k_functional_numeric(x, t, pair)
    w.row({"n": n, "t": t, "value": res.value, "method": "heuristic" if res.heuristic else "numeric"})
    return True


def cmd_verify(P, w: Writer) -> bool:
    timings: dict = {}
    results = run_suites(suite_names(P.get("suite", "all")), P.get("seed", 42), timings)
    w.extras.update(results=results, timings=timings)
    ok = all(r.passed for r in results)
    text = render(results)
    lines = text.splitlines()
    w.header(lines[0].split(","))
    if w.fmt == "csv":
        w.stream.write("\n".join(lines[1:]) + "\n")
        for r in results:
            w.stream.write(f"# criterion {r.criterion} {'PASS' if r.passed else 'FAIL'}: {r.title}\n")
    else:
        for r in results:
            for row in r.rows:
                w.row({"criterion": r.criterion, "suite": r.title, "item": row.item,
                       "measured": row.measured, "limit": row.limit, "verdict": "pass" if row.ok else "fail"})
    return ok


HANDLERS = {
    "norm": cmd_norm,
    "opnorm": cmd_opnorm,
    "sigma": cmd_sigma,
    "usup": cmd_usup,
    "envelope": cmd_envelope,
    "volume": cmd_volume,
    "entropy-bounds": cmd_entropy_bounds,
    "kfunc": cmd_kfunc,
    "verify": cmd_verify,
}


def run(config: ExperimentConfig, stream, extras: Optional[dict] = None) -> int:
    """Run one command; the report is buffered so a failure leaves no partial output."""
    meta = {"command": config.command}
    meta.update({k: config.raw[k] for k in sorted(config.raw)})
    buf = io.StringIO()
    w = Writer(buf, config.format, meta)
    ok = HANDLERS[config.command](config.params, w)
    if extras is not None:
        extras.update(w.extras)
    stream.write(buf.getvalue())
    return 0 if ok else 1


def _error(kind: str, message: str, command=None) -> int:
    rec = {"error": kind, "message": message}
    if command:
        rec["command"] = command
    sys.stderr.write(json.dumps(rec) + "\n")
    return 2


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except UsageError as exc:
        return _error("usage", str(exc))
    try:
        if config.output == "-":
            return run(config, sys.stdout)
        buf = io.StringIO()
        status = run(config, buf)
        with open(config.output, "w", newline="\n") as fh:
            fh.write(buf.getvalue())
        return status
    except (UsageError, NotAvailable) as exc:
        return _error(type(exc).__name__, str(exc), config.command)
    except ValueError as exc:
        return _error("invalid", str(exc), config.command)


if __name__ == "__main__":
    sys.exit(main())
