"""Exact and Monte Carlo volumes of Lorentz balls and the normalized volume ratio.

Monte Carlo estimates are hit-or-miss: points are drawn uniformly from a
proposal body that certainly contains the ball and the hit fraction is scaled
by the proposal volume.  The proposal is the cube ``[-1,1]^n`` (valid because
``x*_1 <= ||x||_{p,u}``) or a scaled quasi-ball ``R B_q^n`` when a certified
containment ``||x||_q <= R ||x||_{p,u}`` gives a smaller body.

Random numbers come from Philox keyed by the seed; shard ``i`` uses the
stream jumped ``i`` times, so a fixed shard plan is reproducible regardless
of execution order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .seqcore import LorentzParams, fundamental_phi, lorentz_norm_rows, lorentz_weights

SHARD = 1 << 16
N_CAP = 12


class InsufficientSamples(RuntimeError):
    """Monte Carlo run produced no hits, so no ratio can be formed."""


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    hits: int = 0
    proposal: str = "cube"

    def __post_init__(self):
        if self.mean < 0 or self.std_error < 0:
            raise ValueError("mean and std_error must be nonnegative")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


def lp_ball_volume_exact(p, n: int) -> float:
    """``2^n Gamma(1+1/p)^n / Gamma(1+n/p)`` (``2^n`` for ``p = inf``)."""
    p = float(p)
    if not p > 0 or n < 1:
        raise ValueError("need p > 0 and n >= 1")
    if math.isinf(p):
        return 2.0**n
    return math.exp(n * math.log(2.0) + n * math.lgamma(1.0 + 1.0 / p) - math.lgamma(1.0 + n / p))


# exponents of the l_q proposal bodies tried besides the cube
Q_LADDER = (1.0, 0.8, 0.6, 0.4, 0.3, 0.2)


def lq_containment_radius(lp: LorentzParams, n: int, q: float) -> float:
    """Certified ``R`` with ``||x||_q <= R ||x||_{p,u}`` on ``R^n`` (``0 < q <= 1``).

    Writing ``x*_i = w_i y_i`` with ``w_i = i^{1/u-1/p}`` gives ``||y||_u = ||x||_{p,u}``;
    then the inclusion of ``l_u`` in ``l_q`` (``u <= q``) or Hoelder with exponent ``u/q`` bounds
    ``sum w_i^q y_i^q``.
    """
    if not 0 < q <= 1:
        raise ValueError("q must lie in (0, 1]")
    i = np.arange(1, n + 1, dtype=float)
    w = i ** (lp.inv_u - lp.inv_p)
    if not lp.u_finite:
        return float(np.sum(w**q) ** (1.0 / q))
    if lp.u <= q:
        return float(w.max())
    rc = lp.u / (lp.u - q)
    return float(np.sum(w ** (q * rc)) ** (1.0 / (q * rc)))


def _proposal(lp: LorentzParams, n: int, kind: str = "auto") -> tuple[str, float, float, float]:
    """Smallest certified proposal body; returns (kind, q, radius, volume)."""
    options = []
    if kind in ("auto", "cube"):
        options.append(("cube", math.inf, 1.0, 2.0**n))
    if kind in ("auto", "lq"):
        for q in Q_LADDER:
            R = lq_containment_radius(lp, n, q)
            options.append(("lq", q, R, R**n * lp_ball_volume_exact(q, n)))
    if not options:
        raise ValueError(f"unknown proposal {kind!r}")
    return min(options, key=lambda o: o[3])


def _draw(rng: np.random.Generator, q: float, R: float, m: int, n: int) -> np.ndarray:
    """Uniform points in the positive part of the cube or of ``R B_q^n``."""
    if math.isinf(q):
        return rng.random((m, n))
    # |G_i|^q ~ Gamma(1/q), E ~ Exp(1): G / (sum |G_i|^q + E)^{1/q} is uniform in B_q
    g = rng.standard_gamma(1.0 / q, size=(m, n))
    e = rng.standard_exponential(m)
    return R * g ** (1.0 / q) / (g.sum(axis=1) + e)[:, None] ** (1.0 / q)


def _hits(lp: LorentzParams, n: int, samples: int, seed: int, q: float, R: float) -> int:
    w = lorentz_weights(lp, n)
    hits = 0
    bitgen = np.random.Philox(key=seed & (2**64 - 1))
    shard = 0
    done = 0
    while done < samples:
        m = min(SHARD, samples - done)
        rng = np.random.Generator(bitgen.jumped(shard))
        # both proposals are sign symmetric, so the positive orthant suffices
        x = _draw(rng, q, R, m, n)
        x = -np.sort(-x, axis=1)
        hits += int(np.count_nonzero(lorentz_norm_rows(x, lp, w) <= 1.0))
        done += m
        shard += 1
    return hits


def lorentz_ball_volume_mc(lp: LorentzParams, n: int, samples: int, seed: int = 0,
                           proposal: str = "auto") -> McEstimate:
    """Hit-or-miss estimate of ``vol(B_{p,u}^n)``; deterministic given ``seed``.

    ``proposal`` is ``"auto"`` (smallest certified body), ``"cube"`` or ``"lq"``.
    """
    if n < 1 or samples < 1:
        raise ValueError("need n >= 1 and samples >= 1")
    kind, q, R, vol = _proposal(lp, n, proposal)
    h = _hits(lp, n, samples, seed, q, R)
    frac = h / samples
    se = math.sqrt(frac * (1.0 - frac) / samples) * vol
    label = "cube" if kind == "cube" else f"l_{q:g}*{R:.6g}"
    return McEstimate(frac * vol, se, samples, seed, h, label)


def volume_envelope(lp: LorentzParams, n: int) -> float:
    """Shape of ``vol(B_{p,u}^n)^{1/n}``: ``n^{-1/p}`` or ``ln(n+1)^{-1/u}`` for ``p = inf``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if lp.p_finite:
        return float(n) ** (-lp.inv_p)
    return math.log(n + 1.0) ** (-lp.inv_u)


def exact_volume(lp: LorentzParams, n: int):
    """Closed-form volume when one is known (``l_p`` balls and the cube), else ``None``."""
    if lp.is_lebesgue:
        return lp_ball_volume_exact(lp.p, n)
    if n == 1:
        return 2.0
    return None


@dataclass(frozen=True)
class RvEstimate:
    value: float
    std_error: float
    method: str


def _root(lp, n, method, samples, seed) -> tuple[float, float, str]:
    """``vol^{1/n}`` and the relative standard error of ``vol``."""
    if method == "exact-when-available":
        v = exact_volume(lp, n)
        if v is not None:
            return v ** (1.0 / n), 0.0, "exact"
    elif method != "mc":
        raise ValueError(f"unknown method {method!r}")
    est = lorentz_ball_volume_mc(lp, n, samples, seed)
    if est.hits == 0:
        raise InsufficientSamples(f"no hits for {lp} at n={n} with {samples} samples")
    return est.mean ** (1.0 / n), est.std_error / est.mean, "mc"


def rv(a: LorentzParams, b: LorentzParams, n: int, method: str = "exact-when-available",
       samples: int = 200_000, seed: int = 0) -> Union[float, RvEstimate]:
    """``vol(B_a)^{1/n} / vol(B_b)^{1/n}``.

    Returns a float when both volumes are exact, otherwise an ``RvEstimate``
    with delta-method standard error ``rv/n * sqrt(rel_a^2 + rel_b^2)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if a == b:
        return 1.0
    ra, ea, ma = _root(a, n, method, samples, seed)
    rb, eb, mb = _root(b, n, method, samples, seed + 1)
    val = ra / rb
    if ma == "exact" and mb == "exact":
        return val
    return RvEstimate(val, val / n * math.hypot(ea, eb), f"{ma}/{mb}")


def rv_value(x) -> float:
    return x.value if isinstance(x, RvEstimate) else float(x)


def entropy_vol_lower(k: int, n: int, rv_value: float) -> float:
    """``2^{-(k-1)/n} rv``: volume lower bound for ``e_k``."""
    if not rv_value > 0:
        raise ValueError("rv_value must be positive")
    if k < 1 or n < 1:
        raise ValueError("k and n must be >= 1")
    return 2.0 ** (-(k - 1) / n) * rv_value


def phi_vs_volume(lp: LorentzParams, n: int, samples: int = 200_000, seed: int = 0) -> tuple[float, float]:
    """``(1/phi(n), vol(B)^{1/n})`` with the volume exact when known, else Monte Carlo."""
    v = exact_volume(lp, n)
    if v is None:
        est = lorentz_ball_volume_mc(lp, n, samples, seed)
        if est.hits == 0:
            raise InsufficientSamples(f"no hits for {lp} at n={n}")
        v = est.mean
    return 1.0 / fundamental_phi(lp, n), v ** (1.0 / n)
