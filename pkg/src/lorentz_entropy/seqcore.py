"""Rearrangements, Lorentz quasi-norms and the scalar sums built on them.

Every vector is treated through its non-increasing rearrangement ``x*``.
The Lorentz quasi-norm used throughout is

    ||x||_{p,u} = ( sum_i i^{u/p - 1} (x*_i)^u )^{1/u}      (u < inf)
    ||x||_{p,inf} = max_i i^{1/p} x*_i

with the convention ``1/inf = 0``.  Infinite parameters are stored as
``math.inf`` and always tested with ``math.isinf``; no large finite stand-in
is ever used for ``u = inf``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

import numpy as np

INF = math.inf

Number = Union[int, float]


def _recip(a: float) -> float:
    return 0.0 if math.isinf(a) else 1.0 / a


def parse_extended(value) -> float:
    """Parse a positive extended real; accepts ``"inf"`` (any case) and ``math.inf``."""
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "infinity", "+inf", "oo"):
            return INF
        if "/" in token:
            num, den = token.split("/", 1)
            return float(num) / float(den)
        return float(token)
    return float(value)


@dataclass(frozen=True)
class LorentzParams:
    """Exponent pair ``(p, u)`` of the Lorentz space ``l_{p,u}``."""

    p: float
    u: float

    def __post_init__(self):
        p = parse_extended(self.p)
        u = parse_extended(self.u)
        for name, val in (("p", p), ("u", u)):
            if math.isnan(val) or val <= 0:
                raise ValueError(f"{name} must be a positive extended real, got {val!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "u", u)

    @classmethod
    def lp(cls, p) -> "LorentzParams":
        return cls(p, p)

    @property
    def inv_p(self) -> float:
        return _recip(self.p)

    @property
    def inv_u(self) -> float:
        return _recip(self.u)

    @property
    def p_finite(self) -> bool:
        return not math.isinf(self.p)

    @property
    def u_finite(self) -> bool:
        return not math.isinf(self.u)

    @property
    def is_lebesgue(self) -> bool:
        return self.p == self.u

    @property
    def is_norm(self) -> bool:
        # weights i^{u/p-1} non-increasing and u >= 1 give a genuine norm
        return self.u >= 1 and self.u <= self.p

    def __str__(self) -> str:
        def fmt(a):
            return "inf" if math.isinf(a) else f"{a:g}"

        return f"l_{{{fmt(self.p)},{fmt(self.u)}}}"


@dataclass(frozen=True)
class QuasiConstants:
    c_quasi: float
    p_ar: float

    def __post_init__(self):
        if self.c_quasi < 1:
            raise ValueError("quasi-norm constant must be >= 1")
        if not 0 < self.p_ar <= 1:
            raise ValueError("Aoki-Rolewicz exponent must lie in (0, 1]")


def as_vector(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float).reshape(-1)
    if arr.size < 1:
        raise ValueError("vector must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def rearrange(x) -> np.ndarray:
    """Non-increasing rearrangement of ``|x|``."""
    a = np.abs(as_vector(x))
    return -np.sort(-a)


def lorentz_weights(lp: LorentzParams, n: int) -> np.ndarray:
    """Per-index weights: ``i^{u/p-1}`` for finite ``u``, ``i^{1/p}`` for ``u = inf``."""
    i = np.arange(1, n + 1, dtype=float)
    if lp.u_finite:
        expo = lp.u * lp.inv_p - 1.0
    else:
        expo = lp.inv_p
    if expo == 0.0:
        return np.ones(n)
    return i**expo


def _norm_sorted(xs: np.ndarray, lp: LorentzParams) -> float:
    """Norm of an already rearranged vector; compensated summation."""
    if xs.size == 0:
        return 0.0
    top = float(xs[0])
    if top == 0.0:
        return 0.0
    y = xs / top
    w = lorentz_weights(lp, xs.size)
    if not lp.u_finite:
        return top * float(np.max(w * y))
    terms = w * y**lp.u
    return top * math.fsum(terms.tolist()) ** (1.0 / lp.u)


def lorentz_norm(x, lp: LorentzParams) -> float:
    """Lorentz quasi-norm ``||x||_{p,u}``."""
    return _norm_sorted(rearrange(x), lp)


def lorentz_norm_rows(xs: np.ndarray, lp: LorentzParams, weights: np.ndarray | None = None) -> np.ndarray:
    """Row-wise norms of a matrix whose rows are already non-increasing and >= 0.

    Fast path for optimisers and Monte Carlo; uses numpy's pairwise summation
    rather than exact summation.
    """
    xs = np.asarray(xs, dtype=float)
    n = xs.shape[-1]
    w = lorentz_weights(lp, n) if weights is None else weights
    if not lp.u_finite:
        return np.max(xs * w, axis=-1)
    if xs.ndim == 1:
        return lorentz_norm_rows(xs[None, :], lp, w)[0]
    u = lp.u
    with np.errstate(over="ignore", under="ignore"):
        s = np.sum(w * _pow(xs, u), axis=-1)
    bad = ~np.isfinite(s) | ((s == 0) & (xs[..., 0] > 0)) | (s < 1e-280)
    if np.any(bad):
        # rescale rows whose unscaled power sum under- or overflows
        sub = xs[bad]
        top = sub[..., :1]
        safe = np.where(top > 0, top, 1.0)
        s = s ** (1.0 / u)
        s[bad] = top[..., 0] * np.sum(w * _pow(sub / safe, u), axis=-1) ** (1.0 / u)
        return s
    return s ** (1.0 / u)


def _pow(a: np.ndarray, u: float) -> np.ndarray:
    if u == 1.0:
        return a
    if u == 2.0:
        return a * a
    return a**u


def sort_rows_desc(x: np.ndarray) -> np.ndarray:
    return -np.sort(-np.abs(x), axis=-1)


def lp_norm(x, p: float) -> float:
    """Plain ``l_p`` quasi-norm by the direct power-sum formula."""
    a = np.abs(as_vector(x))
    p = parse_extended(p)
    if math.isinf(p):
        return float(a.max())
    return math.fsum((a**p).tolist()) ** (1.0 / p)


def harmonic(n: int) -> float:
    """``H_n = sum_{k<=n} 1/k`` summed in ascending ``k``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.fsum(1.0 / k for k in range(1, n + 1))


def fundamental_phi(lp: LorentzParams, n: int) -> float:
    """Exact fundamental function ``||1_n||_{p,u}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    w = lorentz_weights(lp, n)
    if not lp.u_finite:
        return float(w.max())
    return math.fsum(w.tolist()) ** (1.0 / lp.u)


def fundamental_proxy(lp: LorentzParams, n: int) -> float:
    """Asymptotic shape of the fundamental function: ``n^{1/p}`` or ``ln(n+1)^{1/u}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if lp.p_finite:
        return float(n) ** lp.inv_p
    return math.log(n + 1) ** lp.inv_u


def xstar_envelope(lp: LorentzParams, i: int) -> float:
    """Decay shape for the i-th largest entry of a unit vector (constant excluded)."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if lp.p_finite:
        return float(i) ** (-lp.inv_p)
    return math.log(i + 1) ** (-lp.inv_u)


def _tail_terms(n: int, s: int, lam: float, variant: str) -> np.ndarray:
    i = np.arange(s + 1, n + 1, dtype=float)
    if variant == "power":
        return (i - s) ** -1.0 * i**-lam
    return (i - s) ** -1.0 * np.log(i) ** -lam


def _check_tail_args(s: int, lam: float, variant: str):
    if variant not in ("power", "log"):
        raise ValueError("variant must be 'power' or 'log'")
    if s < 1:
        raise ValueError("s must be >= 1")
    if variant == "power" and not lam > 0:
        raise ValueError("power variant requires lambda > 0")
    if variant == "log" and not lam > 1:
        raise ValueError("log variant requires lambda > 1")


def tail_sum(n: int, s: int, lam: float, variant: str = "power") -> float:
    """Exact tail sum ``sum_{i=s+1}^n (i-s)^{-1} i^{-lam}`` (or ``(ln i)^{-lam}``).

    ``s == n`` gives the empty sum 0 and emits a warning; ``s > n`` is rejected.
    """
    _check_tail_args(s, lam, variant)
    if s > n:
        raise ValueError("tail sum needs s <= n")
    if s == n:
        warnings.warn("empty tail sum (s == n) returns 0", RuntimeWarning, stacklevel=2)
        return 0.0
    return math.fsum(_tail_terms(n, s, lam, variant).tolist())


def tail_sums_upto(n_max: int, s: int, lam: float, variant: str = "power") -> np.ndarray:
    """All tail sums for ``n = s+1 .. n_max`` at once (entry ``j`` is ``n = s+1+j``)."""
    _check_tail_args(s, lam, variant)
    if n_max <= s:
        raise ValueError("need n_max > s")
    return np.cumsum(_tail_terms(n_max, s, lam, variant))


def tail_bound(s: int, lam: float, variant: str = "power") -> float:
    """Envelope ``s^{-lam} ln(s+1)`` (power) or ``ln(s+1)^{1-lam}`` (log)."""
    _check_tail_args(s, lam, variant)
    if variant == "power":
        return float(s) ** -lam * math.log(s + 1)
    return math.log(s + 1) ** (1.0 - lam)


def aoki_rolewicz_p(c_quasi: float) -> float:
    """Exponent ``p`` with ``C = 2^{1/p - 1}``."""
    if not c_quasi >= 1:
        raise ValueError("quasi-norm constant must be >= 1")
    return 1.0 / (1.0 + math.log2(c_quasi))


def _sample_vectors(rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
    x = rng.standard_normal((trials, n))
    spike = rng.random(trials) < 0.25
    m = int(spike.sum())
    if m:
        # scaled indicators of random supports; size 1 gives coordinate vectors
        sizes = rng.integers(1, n + 1, size=m)
        sizes = np.where(rng.random(m) < 0.5, 1, sizes)
        keys = rng.random((m, n))
        ranks = np.argsort(np.argsort(keys, axis=1), axis=1)
        ind = (ranks < sizes[:, None]).astype(float)
        scale = np.exp(rng.standard_normal(m))
        x[spike] = ind * scale[:, None]
    return x


def quasi_constant_estimate(lp: LorentzParams, n: int, trials: int, seed: int = 0) -> QuasiConstants:
    """Empirical quasi-triangle constant ``max ||x+y|| / (||x|| + ||y||)`` over sampled pairs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    x = _sample_vectors(rng, trials, n)
    y = _sample_vectors(rng, trials, n)
    # disjoint supports: equal indicators of every size and random vectors split in two
    sizes = np.arange(1, n // 2 + 1)
    if sizes.size:
        idx = np.arange(n)
        xi = (idx[None, :] < sizes[:, None]).astype(float)
        yi = ((idx[None, :] >= sizes[:, None]) & (idx[None, :] < 2 * sizes[:, None])).astype(float)
        z = _sample_vectors(rng, trials, n)
        half = rng.random((trials, n)) < 0.5
        x = np.vstack([x, xi, np.where(half, z, 0.0)])
        y = np.vstack([y, yi, np.where(half, 0.0, z)])
    w = lorentz_weights(lp, n)
    nx = lorentz_norm_rows(sort_rows_desc(x), lp, w)
    ny = lorentz_norm_rows(sort_rows_desc(y), lp, w)
    nxy = lorentz_norm_rows(sort_rows_desc(x + y), lp, w)
    denom = nx + ny
    ok = denom > 0
    c = float(np.max(nxy[ok] / denom[ok])) if ok.any() else 1.0
    c = max(c, 1.0)
    return QuasiConstants(c_quasi=c, p_ar=aoki_rolewicz_p(c))


def certified_quasi_constant(lp: LorentzParams, n: int, seed: int = 0) -> tuple[float, str]:
    """Quasi-triangle constant used in certificates, with its provenance.

    Genuine norms give 1 and ``l_p`` with ``p < 1`` gives ``2^{1/p-1}``; other
    cells use the sampled estimate inflated by 10%.
    """
    if lp.is_norm:
        return 1.0, "norm"
    if lp.is_lebesgue and lp.p < 1:
        return 2.0 ** (1.0 / lp.p - 1.0), "p-norm"
    est = quasi_constant_estimate(lp, n, 4000, seed)
    return 1.1 * est.c_quasi, "measured*1.1"
