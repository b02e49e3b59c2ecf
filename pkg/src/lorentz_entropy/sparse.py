"""Best s-term approximation, the truncation functional and their ball suprema."""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .ascent import AscentOptions, maximize_ratio
from .cells import EmbeddingSpec, NotAvailable, ell
from .opnorm import NormResult, power_profile
from .seqcore import LorentzParams, _norm_sorted, lorentz_norm, lorentz_norm_rows, lorentz_weights, rearrange

_LN3 = math.log(3.0)


def _check_s(s: int, n: int, lo: int):
    if int(s) != s:
        raise ValueError("s must be an integer")
    if s < lo or s > n:
        raise ValueError(f"s must satisfy {lo} <= s <= n (got s={s}, n={n})")


def sigma_s(x, s: int, target: LorentzParams) -> float:
    """Error of best ``s``-term approximation of ``x`` in the target quasi-norm.

    Keeping the ``s`` largest entries is optimal for symmetric lattice
    quasi-norms, so this is the norm of ``(x*_{s+1}, ..., x*_n)``.
    """
    xs = rearrange(x)
    _check_s(s, xs.size, 0)
    return _norm_sorted(xs[int(s):], target)


def trunc_u(x, s: int, target: LorentzParams) -> float:
    """Target norm of ``min(x*_s, x*_i)``, the rearrangement capped at its s-th value."""
    xs = rearrange(x)
    _check_s(s, xs.size, 1)
    return _norm_sorted(np.minimum(xs, xs[int(s) - 1]), target)


def s_of_k(n: int, k: int) -> int:
    """The integer ``s`` with ``l(k,n) < s <= 1 + l(k,n)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return int(math.floor(ell(k, n))) + 1


# -- ball suprema -----------------------------------------------------------

def _sparse_starts(src: LorentzParams, n: int, s: int) -> list[np.ndarray]:
    s = max(min(s, n), 1)
    head = np.zeros(n)
    head[:s] = float(s) ** (-src.inv_p)
    tail = head.copy()
    tail[s:] = power_profile(src, n)[s:]
    flat = np.ones(n)
    return [head, tail, power_profile(src, n), flat]


def _trunc_rows(spec: EmbeddingSpec, s: int):
    tw = lorentz_weights(spec.target, spec.n)

    def numerator(X):
        Z = X.copy()
        Z[..., : s - 1] = X[..., s - 1 : s]
        return lorentz_norm_rows(Z, spec.target, tw)

    return numerator


def _sigma_rows(spec: EmbeddingSpec, s: int):
    tw = lorentz_weights(spec.target, spec.n - s)

    def numerator(X):
        return lorentz_norm_rows(X[..., s:], spec.target, tw)

    return numerator


def _numeric(spec, s, numerator, scalar, opts: Optional[AscentOptions]) -> NormResult:
    res = maximize_ratio(numerator, spec.source, spec.n, _sparse_starts(spec.source, spec.n, s), opts)
    w = res.witness / lorentz_norm(res.witness, spec.source)
    return NormResult(scalar(w), "numeric", w, res.iterations, res.converged)


def u_sup_numeric(spec: EmbeddingSpec, s: int, opts: Optional[AscentOptions] = None) -> NormResult:
    """Lower bound on ``sup trunc_u(x, s)`` over the source unit ball."""
    _check_s(s, spec.n, 1)
    return _numeric(spec, s, _trunc_rows(spec, s), lambda w: trunc_u(w, s, spec.target), opts)


def sigma_sup_numeric(spec: EmbeddingSpec, s: int, opts: Optional[AscentOptions] = None) -> NormResult:
    """Lower bound on ``sup sigma_s(x)`` over the source unit ball (0 for ``s >= n``)."""
    if s < 0:
        raise ValueError("s must be >= 0")
    if s >= spec.n:
        return NormResult(0.0, "exact", np.eye(1, spec.n).ravel(), 0)
    if s == 0:
        from .opnorm import embedding_norm_numeric

        o = opts or AscentOptions()
        return embedding_norm_numeric(spec, o.starts, o.max_iter, o.tol, o.seed)
    return _numeric(spec, s, _sigma_rows(spec, s), lambda w: sigma_s(w, s, spec.target), opts)


def u_sup_envelope(spec: EmbeddingSpec, s: int) -> float:
    """Asymptotic shape of ``sup trunc_u`` for the cells II, III.2 and IV.2."""
    src, tgt, n = spec.source, spec.target, spec.n
    if s < 1:
        raise ValueError("s must be >= 1")
    if not s < n / _LN3:
        raise ValueError("envelope needs s < n / ln 3")
    case = spec.case
    if case == "II":
        return float(s) ** (-src.inv_p) * math.log(s + 1) ** tgt.inv_u
    if case == "III.2":
        return math.log(n / s + 1) ** (tgt.inv_u - src.inv_u)
    if case == "IV.2":
        return math.log(s + 1) ** (tgt.inv_u - src.inv_u)
    raise NotAvailable(f"no truncation envelope for case {case}")


def u_sup(spec: EmbeddingSpec, s: int, method: str = "envelope", opts: Optional[AscentOptions] = None) -> float:
    if method == "envelope":
        return u_sup_envelope(spec, s)
    if method == "numeric":
        return u_sup_numeric(spec, s, opts).value
    raise ValueError(f"unknown method {method!r}")


def sigma_sup(spec: EmbeddingSpec, s: int, method: str = "envelope", opts: Optional[AscentOptions] = None) -> float:
    if method == "envelope":
        if s >= spec.n:
            return 0.0
        return u_sup_envelope(spec, s)
    if method == "numeric":
        return sigma_sup_numeric(spec, s, opts).value
    raise ValueError(f"unknown method {method!r}")


def sterm_bound(spec: EmbeddingSpec, s: int) -> Optional[float]:
    """Shape of the upper bound for ``sigma_s(x)/||x||_source``; ``None`` off the covered cells."""
    src, tgt, n = spec.source, spec.target, spec.n
    _check_s(s, n, 1)
    if not tgt.p_finite and src.p_finite:
        return float(s) ** (-src.inv_p) * math.log(s + 1) ** tgt.inv_u
    if not tgt.p_finite and not src.p_finite and src.u < tgt.u:
        return math.log(s + 1) ** (tgt.inv_u - src.inv_u)
    if src.p_finite and src.p == tgt.p and tgt.u < src.u:
        return (math.log(n / s) + 1.0) ** (tgt.inv_u - src.inv_u)
    return None
