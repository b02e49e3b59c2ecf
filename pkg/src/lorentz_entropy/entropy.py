"""Entropy-number envelopes and the abstract upper/lower bound formulas.

Envelopes are shape functions: they reproduce asymptotic behaviour up to
parameter-dependent constants, which are never included.  Regimes are
``k <= ln(n+1)`` (small), ``ln(n+1) < k <= n`` (mid) and ``k > n`` (large).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cells import EmbeddingSpec, EnvelopeValue, NotAvailable, ell, regime_of
from .seqcore import fundamental_phi, parse_extended
from .sparse import s_of_k, u_sup_envelope

__all__ = [
    "EntropyBracket",
    "ell",
    "envelope_lp",
    "envelope_lorentz",
    "envelope_branches",
    "envelope_via_en",
    "upper_identity",
    "large_k_envelope",
]


@dataclass(frozen=True)
class EntropyBracket:
    lower: float
    upper: float
    lower_method: str
    upper_method: str
    k: int
    n: int

    def __post_init__(self):
        if self.lower < 0 or not self.upper > 0:
            raise ValueError("need lower >= 0 and upper > 0")
        if self.lower > self.upper:
            raise ValueError(f"inconsistent bracket: lower {self.lower} > upper {self.upper}")


def _check_kn(k, n):
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")


def _lp_branches(p: float, r: float, n: int, k: int) -> tuple[str, dict]:
    ip = 0.0 if math.isinf(p) else 1.0 / p
    ir = 0.0 if math.isinf(r) else 1.0 / r
    big = 2.0 ** (-k / n) * float(n) ** (ir - ip)
    if p < r:
        mid = (math.log(n / k + 1.0) / k) ** (ip - ir)
        return "classical-le", {"small-k": 1.0, "mid-k": mid, "large-k": big}
    return "classical-ge", {"small-k": big, "mid-k": big, "large-k": big}


def envelope_lp(p, r, n: int, k: int) -> EnvelopeValue:
    """Classical envelope for ``e_k(id: l_p^n -> l_r^n)``."""
    p, r = parse_extended(p), parse_extended(r)
    if not (p > 0 and r > 0):
        raise ValueError("p and r must be positive")
    _check_kn(k, n)
    tag, br = _lp_branches(p, r, n, k)
    reg = regime_of(k, n)
    return EnvelopeValue(br[reg], tag, reg, k, n)


def envelope_branches(spec: EmbeddingSpec, k: int) -> tuple[str, dict]:
    """All three regime formulas of the case envelope evaluated at ``k``.

    Used to quantify jumps at regime junctions; ``envelope_lorentz`` picks one.
    """
    src, tgt, n = spec.source, spec.target, spec.n
    _check_kn(k, n)
    case = spec.case
    L = math.log(n + 1.0)
    decay = 2.0 ** (-k / n)
    d = tgt.inv_u - src.inv_u
    if case == "0":
        _, br = _lp_branches(src.p, tgt.p, n, k)
    elif case == "I":
        v = decay * float(n) ** tgt.inv_p * L ** (-src.inv_u)
        br = {"small-k": v, "mid-k": v, "large-k": v}
    elif case == "II":
        lk = ell(k, n)
        br = {
            "small-k": 1.0,
            "mid-k": lk ** (-src.inv_p) * math.log(lk + 1.0) ** tgt.inv_u,
            "large-k": decay * float(n) ** (-src.inv_p) * L ** tgt.inv_u,
        }
    elif case == "III.1":
        br = {"small-k": decay, "mid-k": decay, "large-k": decay}
    elif case == "III.2":
        v = math.log(n / k + 1.0) ** d
        br = {"small-k": v, "mid-k": v, "large-k": decay}
    elif case == "IV.1":
        v = decay * L ** d
        br = {"small-k": v, "mid-k": v, "large-k": v}
    else:  # IV.2
        br = {
            "small-k": 1.0,
            "mid-k": math.log(ell(k, n) + 1.0) ** d,
            "large-k": decay * L ** d,
        }
    return case, br


def envelope_lorentz(spec: EmbeddingSpec, k: int) -> EnvelopeValue:
    """Case-dispatched envelope of ``e_k(id: l_{p,u}^n -> l_{q,v}^n)``."""
    case, br = envelope_branches(spec, k)
    reg = regime_of(k, spec.n)
    return EnvelopeValue(br[reg], case, reg, k, spec.n)


def envelope_via_en(spec: EmbeddingSpec, k: int) -> EnvelopeValue:
    """Envelope through the truncation functional at ``s = s(n, k)``; needs ``k < n/2``."""
    n = spec.n
    _check_kn(k, n)
    if not k < n / 2:
        raise NotAvailable("reduction through u(X,Y,s) needs k < n/2")
    val = u_sup_envelope(spec, s_of_k(n, k))
    return EnvelopeValue(val, spec.case, regime_of(k, n), k, n)


def upper_identity(p_ar: float, n: int, k: int) -> float:
    """``4^{1/p} 2^{-(k-1)/n}``: upper bound for ``e_k`` of the identity on an n-dim p-Banach space."""
    if not 0 < p_ar <= 1:
        raise ValueError("p_ar must lie in (0, 1]")
    _check_kn(k, n)
    return 4.0 ** (1.0 / p_ar) * 2.0 ** (-(k - 1) / n)


def large_k_envelope(spec: EmbeddingSpec, k: int) -> float:
    """``2^{-k/n} phi_Y(n) / phi_X(n)`` with exact fundamental functions (``k >= n``)."""
    n = spec.n
    if k < n:
        raise ValueError("large-k envelope needs k >= n")
    return 2.0 ** (-k / n) * fundamental_phi(spec.target, n) / fundamental_phi(spec.source, n)
