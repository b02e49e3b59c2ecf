"""K-functionals, the real-interpolation (theta, u) quasi-norm and an entropy interpolation harness."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .seqcore import LorentzParams, as_vector, lorentz_norm, lorentz_norm_rows, lorentz_weights, parse_extended


@dataclass(frozen=True)
class InterpPair:
    space0: LorentzParams
    space1: LorentzParams
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    @classmethod
    def l1_linf(cls, n: int) -> "InterpPair":
        return cls(LorentzParams(1, 1), LorentzParams(math.inf, math.inf), n)

    @property
    def convex(self) -> bool:
        return self.space0.is_norm and self.space1.is_norm


@dataclass
class KResult:
    value: float
    x0: np.ndarray
    converged: bool
    heuristic: bool
    evaluations: int = 0


def k_functional_l1_linf(x, t: float) -> float:
    """Closed form ``K(t, x; l_1, l_inf)``: sum of the ``floor(t)`` largest entries plus a fractional part."""
    if not t > 0:
        raise ValueError("t must be positive")
    xs = -np.sort(-np.abs(as_vector(x)))
    n = xs.size
    if t >= n:
        return math.fsum(xs.tolist())
    m = int(math.floor(t))
    frac = t - m
    return math.fsum(xs[:m].tolist()) + (frac * xs[m] if frac > 0 else 0.0)


def _k_curve_l1_linf(xs: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Vectorized closed form over many ``t`` for a sorted nonnegative vector."""
    n = xs.size
    cs = np.concatenate([[0.0], np.cumsum(xs)])
    tc = np.minimum(ts, float(n))
    m = np.floor(tc).astype(np.int64)
    frac = np.where(m < n, tc - m, 0.0)
    nxt = np.where(m < n, xs[np.minimum(m, n - 1)], 0.0)
    return cs[m] + frac * nxt


def _cost_rows(A: np.ndarray, a: np.ndarray, t: float, pair: InterpPair, w0, w1) -> np.ndarray:
    """``||x0|| + t ||a - x0||`` for rows ``x0`` of ``A`` (entries in ``[0, a]``)."""
    X0 = -np.sort(-A, axis=-1)
    X1 = -np.sort(-(a - A), axis=-1)
    return lorentz_norm_rows(X0, pair.space0, w0) + t * lorentz_norm_rows(X1, pair.space1, w1)


def k_functional_numeric(x, t: float, pair: InterpPair, sweeps: int = 50, tol: float = 1e-12) -> KResult:
    """Minimize ``||x0||_0 + t ||x - x0||_1`` over same-sign splits ``0 <= |x0_i| <= |x_i|``.

    Candidates: clipping ``x0 = (|x| - lam)_+`` at every breakpoint and at a
    refined level, keeping the ``m`` largest entries, and proportional splits;
    the best is then polished coordinatewise.  For pairs that are not both
    norms the problem is non-convex and the result is flagged heuristic.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    xv = as_vector(x)
    n = xv.size
    if n != pair.n:
        raise ValueError("vector length does not match the pair")
    a = np.abs(xv)
    w0 = lorentz_weights(pair.space0, n)
    w1 = lorentz_weights(pair.space1, n)
    if not a.any():
        return KResult(0.0, np.zeros(n), True, not pair.convex)
    order = np.argsort(-a, kind="stable")
    xs = a[order]
    # clip levels at every breakpoint, top-m supports and proportional splits
    lams = np.concatenate([xs, [0.0]])
    C = [np.maximum(a[None, :] - lams[:, None], 0.0)]
    top = np.zeros((n + 1, n))
    for m in range(1, n + 1):
        top[m, order[:m]] = a[order[:m]]
    C.append(top)
    C.append(np.linspace(0.0, 1.0, 21)[:, None] * a[None, :])
    C = np.vstack(C)
    vals = _cost_rows(C, a, t, pair, w0, w1)
    evals = C.shape[0]
    best = int(np.argmin(vals))
    x0, cur = C[best].copy(), float(vals[best])

    # continuous clip level between neighbouring breakpoints
    def clip_cost(lam):
        return float(_cost_rows(np.maximum(a - lam, 0.0)[None, :], a, t, pair, w0, w1)[0])

    res = minimize_scalar(clip_cost, bounds=(0.0, float(xs[0])), method="bounded",
                          options={"xatol": 1e-12 * max(1.0, float(xs[0]))})
    evals += int(res.nfev)
    if res.fun < cur:
        cur, x0 = float(res.fun), np.maximum(a - res.x, 0.0)

    # coordinatewise polish
    fracs = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    converged = False
    for _ in range(sweeps):
        start = cur
        for i in range(n):
            if a[i] == 0:
                continue
            lo, hi = 0.0, a[i]
            for width in (1.0, 0.1, 0.01):
                c0 = x0[i]
                grid = np.clip(c0 + (fracs - 0.5) * width * a[i], lo, hi)
                G = np.repeat(x0[None, :], grid.size, axis=0)
                G[:, i] = grid
                v = _cost_rows(G, a, t, pair, w0, w1)
                evals += grid.size
                j = int(np.argmin(v))
                if v[j] < cur:
                    cur, x0 = float(v[j]), G[j]
        if start - cur <= tol * max(1.0, abs(start)):
            converged = True
            break
    return KResult(cur, np.sign(xv) * x0, converged, not pair.convex, evals)


def k_functional(x, t: float, pair: InterpPair) -> float:
    """Closed form for ``(l_1, l_inf)``, numeric minimization otherwise."""
    if pair.space0 == LorentzParams(1, 1) and pair.space1 == LorentzParams(math.inf, math.inf):
        return k_functional_l1_linf(x, t)
    return k_functional_numeric(x, t, pair).value


class TailDominance(RuntimeError):
    """The t-grid misses a significant part of the integral."""


@dataclass
class ThetaNorm:
    value: float
    t_min: float
    t_max: float
    points: int
    tail_fraction: float
    widened: int = 0
    meta: dict = field(default_factory=dict)


def default_grid(n: int, scale: float = 1.0, points: int = 512) -> tuple[float, float, int]:
    """``[1/(4 n s + 1), 4 n s + 1]`` with ``s = max|x|`` (here ``scale``), log spaced."""
    hi = 4.0 * n * scale + 1.0
    return 1.0 / hi, hi, points


def theta_u_norm_detail(x, theta: float, u, pair: InterpPair, grid: Optional[tuple] = None,
                        k_curve: Optional[Callable] = None, max_widen: int = 8,
                        tail_tol: float = 0.01) -> ThetaNorm:
    """``(int (t^{-theta} K(t,x))^u dt/t)^{1/u}`` by the trapezoid rule in ``log t``.

    The vector is first scaled to ``max|x| = 1`` (the result is rescaled), so
    homogeneity holds exactly.  Tails outside the grid are estimated from
    ``K(t) ~ t ||x||_1`` (small ``t``) and ``K(t) <= ||x||_0`` (large ``t``);
    if they exceed ``tail_tol`` of the total the grid is widened, and after
    ``max_widen`` attempts ``TailDominance`` is raised.  ``u = inf`` takes the
    maximum over the grid.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    u = parse_extended(u)
    if not u > 0:
        raise ValueError("u must be positive")
    xv = as_vector(x)
    n = xv.size
    top = float(np.max(np.abs(xv)))
    if top == 0.0:
        return ThetaNorm(0.0, 0.0, 0.0, 0, 0.0)
    y = xv / top
    ys = -np.sort(-np.abs(y))
    if k_curve is None:
        if pair.space0 == LorentzParams(1, 1) and pair.space1 == LorentzParams(math.inf, math.inf):
            def k_curve(ts):
                return _k_curve_l1_linf(ys, ts)
        else:
            def k_curve(ts):
                return np.array([k_functional_numeric(y, float(tt), pair).value for tt in ts])
    lo, hi, pts = grid if grid is not None else default_grid(n)
    norm0 = lorentz_norm(y, pair.space0)
    norm1 = lorentz_norm(y, pair.space1)
    per_decade = pts / math.log(hi / lo)
    for widen in range(max_widen + 1):
        m = max(pts, int(per_decade * math.log(hi / lo)))
        ts = np.geomspace(lo, hi, m)
        K = k_curve(ts)
        if math.isinf(u):
            val = float(np.max(ts ** (-theta) * K))
            tail_small = lo ** (1 - theta) * norm1
            tail_big = hi ** (-theta) * norm0
            tail = max(tail_small, tail_big) / val
            if tail <= 1.0:
                return ThetaNorm(top * val, lo, hi, m, tail, widen)
        else:
            f = (ts ** (-theta) * K) ** u
            s = np.log(ts)
            body = float(np.sum(0.5 * (f[1:] + f[:-1]) * np.diff(s)))
            tail_small = (lo ** (1 - theta) * norm1) ** u / (u * (1 - theta))
            tail_big = (hi ** (-theta) * norm0) ** u / (u * theta)
            total = body + tail_small + tail_big
            tail = (tail_small + tail_big) / total
            if tail <= tail_tol:
                return ThetaNorm(top * body ** (1.0 / u), lo, hi, m, tail, widen)
            # each tail decays like a power of the endpoint; aim at a quarter of the budget
            goal = 0.25 * tail_tol * total
            if tail_small > goal:
                lo *= min(1.0 / 16.0, max(1e-12, (goal / tail_small) ** (1.0 / (u * (1 - theta)))))
            if tail_big > goal:
                hi *= max(16.0, min(1e12, (tail_big / goal) ** (1.0 / (u * theta))))
            continue
        lo, hi = lo / 16.0, hi * 16.0
    raise TailDominance(f"boundary contribution {tail:.3g} exceeds {tail_tol} after widening")


def theta_u_norm(x, theta: float, u, pair: InterpPair, grid: Optional[tuple] = None) -> float:
    return theta_u_norm_detail(x, theta, u, pair, grid).value


# -- one-sided interpolation of entropy numbers -------------------------------

@dataclass
class InterpCheck:
    verdict: str  # "pass", "fail" or "inconclusive"
    c_upper: float  # upper(lhs) / lower-bracket product: pass certified if <= c_allowed
    c_lower: float  # lower(lhs) / upper-bracket product: fail certified if > c_allowed
    c_allowed: float
    detail: dict = field(default_factory=dict)


def interpolation_entropy_check(lhs: tuple, rhs0: tuple, rhs1: tuple, theta: float,
                                c_allowed: float = 16.0) -> InterpCheck:
    """Compare ``e_{k0+k1-1}(X -> Y_theta)`` against ``e_{k0}(X -> Y_0)^{1-theta} e_{k1}(X -> Y_1)^theta``.

    Each argument is a ``(lower, upper)`` bracket.  The check passes when even
    the pessimistic ratio ``upper(lhs) / (lower0^{1-theta} lower1^theta)`` is at
    most ``c_allowed`` and fails when the optimistic ratio
    ``lower(lhs) / (upper0^{1-theta} upper1^theta)`` exceeds it; anything else
    is inconclusive.  Only this one-sided inequality is checked.
    """
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    (l_lo, l_hi), (a_lo, a_hi), (b_lo, b_hi) = lhs, rhs0, rhs1
    lo_prod = a_lo ** (1 - theta) * b_lo**theta
    hi_prod = a_hi ** (1 - theta) * b_hi**theta
    c_up = l_hi / lo_prod if lo_prod > 0 else math.inf
    c_lo = l_lo / hi_prod if hi_prod > 0 else math.inf
    if c_up <= c_allowed:
        verdict = "pass"
    elif c_lo > c_allowed:
        verdict = "fail"
    else:
        verdict = "inconclusive"
    return InterpCheck(verdict, c_up, c_lo, c_allowed, {"lhs": lhs, "rhs0": rhs0, "rhs1": rhs1, "theta": theta})


def entropy_interpolation_report(n: int, source: LorentzParams, pair: Sequence[LorentzParams],
                                 middle: LorentzParams, theta: float, k0: int, k1: int,
                                 seed: int = 0, c_allowed: float = 16.0) -> InterpCheck:
    """Run the one-sided check on identities with brackets from packings and cube covers."""
    from .cells import EmbeddingSpec
    from .covnum import covering_profile, packing_profile

    def bracket(target, k):
        spec = EmbeddingSpec(source, target, n)
        lo = packing_profile(spec, k, seed=seed)[k - 1].lower
        hi = covering_profile(spec, k)[k - 1].upper
        return lo, hi

    k = k0 + k1 - 1
    rep = interpolation_entropy_check(bracket(middle, k), bracket(pair[0], k0), bracket(pair[1], k1),
                                      theta, c_allowed)
    rep.detail.update({"n": n, "k0": k0, "k1": k1})
    return rep
