"""Embedding descriptors, case cells and the envelope value record."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .seqcore import LorentzParams

CASES = ("0", "I", "II", "III.1", "III.2", "IV.1", "IV.2", "classical-le", "classical-ge")
REGIMES = ("small-k", "mid-k", "large-k")


class NotAvailable(ValueError):
    """Raised when a closed form or envelope does not cover the requested cell."""


@dataclass(frozen=True)
class EmbeddingSpec:
    """Natural embedding ``id: l_{p,u}^n -> l_{q,v}^n``."""

    source: LorentzParams
    target: LorentzParams
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def of(cls, p, u, q, v, n) -> "EmbeddingSpec":
        return cls(LorentzParams(p, u), LorentzParams(q, v), n)

    def with_n(self, n: int) -> "EmbeddingSpec":
        return EmbeddingSpec(self.source, self.target, n)

    @property
    def case(self) -> str:
        return case_of(self.source, self.target)

    def __str__(self) -> str:
        return f"id: {self.source} -> {self.target}, n={self.n}"


@dataclass(frozen=True)
class EnvelopeValue:
    value: float
    case_tag: str
    regime: str
    k: int
    n: int

    def __post_init__(self):
        if self.case_tag not in CASES:
            raise ValueError(f"unknown case tag {self.case_tag!r}")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")
        if not self.value > 0:
            raise ValueError("envelope values are positive")


def case_of(source: LorentzParams, target: LorentzParams) -> str:
    """Case cell of the main asymptotic classification for ``source -> target``."""
    p, u, q, v = source.p, source.u, target.p, target.u
    pinf, qinf = math.isinf(p), math.isinf(q)
    if not pinf and not qinf:
        if p != q:
            return "0"
        return "III.1" if u <= v else "III.2"
    if pinf and not qinf:
        return "I"
    if not pinf and qinf:
        return "II"
    return "IV.1" if u >= v else "IV.2"


def regime_of(k: float, n: int) -> str:
    """``k <= ln(n+1)``, ``ln(n+1) < k <= n`` or ``k > n``; ties go to the earlier regime."""
    if k <= math.log(n + 1):
        return "small-k"
    if k <= n:
        return "mid-k"
    return "large-k"


def pos(a: float) -> float:
    return a if a > 0 else 0.0


def ell(k: float, n: int) -> float:
    """``l(k, n) = k / ln(n/k + 1)``."""
    if k <= 0 or n < 1:
        raise ValueError("need k > 0 and n >= 1")
    return k / math.log(n / k + 1.0)
