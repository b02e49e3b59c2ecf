"""Norm of the natural embedding between finite-dimensional Lorentz spaces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ascent import AscentOptions, maximize_ratio
from .cells import EmbeddingSpec, EnvelopeValue, pos
from .seqcore import (
    LorentzParams,
    fundamental_phi,
    harmonic,
    lorentz_norm,
    lorentz_norm_rows,
    lorentz_weights,
)


@dataclass
class NormResult:
    value: float
    kind: str  # "exact", "numeric" or "envelope"
    witness: Optional[np.ndarray]
    iterations: int
    converged: bool = True

    def witness_ratio(self, spec: EmbeddingSpec) -> float:
        w = self.witness
        return lorentz_norm(w, spec.target) / lorentz_norm(w, spec.source)


def power_profile(lp: LorentzParams, n: int) -> np.ndarray:
    """The sequence ``k^{-1/p}``, all ones for ``p = inf``."""
    return np.arange(1, n + 1, dtype=float) ** (-lp.inv_p)


def embedding_norm_exact(spec: EmbeddingSpec) -> Optional[NormResult]:
    """Closed-form norm where one is known, otherwise ``None``.

    Covers ``p = q`` with ``u > v`` (value ``H_n^{1/v-1/u}``) and the identity
    map on a single space.
    """
    src, tgt, n = spec.source, spec.target, spec.n
    if src == tgt:
        w = np.zeros(n)
        w[0] = 1.0
        return NormResult(1.0, "exact", w, 0)
    if src.p == tgt.p and src.u > tgt.u:
        x = power_profile(src, n)
        x = x / lorentz_norm(x, src)
        value = harmonic(n) ** (tgt.inv_u - src.inv_u)
        return NormResult(value, "exact", x, 0)
    return None


def analytic_starts(src: LorentzParams, n: int) -> list[np.ndarray]:
    starts = []
    sizes = sorted({min(2**j, n) for j in range(int(math.log2(n)) + 2)} | {n})
    for s in sizes:
        v = np.zeros(n)
        v[:s] = 1.0
        starts.append(v)
    starts.append(power_profile(src, n))
    if not src.p_finite:
        starts.append(np.log(np.arange(2, n + 2, dtype=float)) ** (-src.inv_u))
    return starts


def embedding_norm_numeric(spec: EmbeddingSpec, starts: int = 16, max_iter: int = 10_000,
                           tol: float = 1e-9, seed: int = 0) -> NormResult:
    """Lower bound on ``sup ||x||_target`` over the source unit ball by multi-start ascent."""
    opts = AscentOptions(starts=starts, max_iter=max_iter, tol=tol, seed=seed)
    tw = lorentz_weights(spec.target, spec.n)

    def numerator(X):
        return lorentz_norm_rows(X, spec.target, tw)

    res = maximize_ratio(numerator, spec.source, spec.n, analytic_starts(spec.source, spec.n), opts)
    w = res.witness / lorentz_norm(res.witness, spec.source)
    value = lorentz_norm(w, spec.target)
    return NormResult(value, "numeric", w, res.iterations, res.converged)


def embedding_norm_envelope(spec: EmbeddingSpec) -> EnvelopeValue:
    """Case-dispatched asymptotic shape of the embedding norm."""
    src, tgt, n = spec.source, spec.target, spec.n
    p, q = src.p, tgt.p
    L = math.log(n + 1)
    if src.p_finite and tgt.p_finite and p != q:
        val, tag = float(n) ** pos(1 / q - 1 / p), "0"
    elif not src.p_finite and tgt.p_finite:
        val, tag = float(n) ** (1 / q) * L ** (-src.inv_u), "I"
    elif src.p_finite and not tgt.p_finite:
        val, tag = 1.0, "II"
    else:
        val = L ** pos(tgt.inv_u - src.inv_u)
        tag = spec.case
    return EnvelopeValue(val, tag, "small-k", 1, n)
