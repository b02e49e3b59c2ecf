"""Multi-start coordinate ascent of a homogeneous ratio over the monotone cone.

Maximises ``F(x) / ||x||_source`` over ``x_1 >= x_2 >= ... >= x_n >= 0`` where
``F`` is positively homogeneous of degree one.  A coordinate move raises (or
lowers) the whole prefix ``x_1..x_j`` by the same amount, i.e. it changes one
increment ``d_j = x_j - x_{j+1}`` while keeping the vector monotone.  After
every accepted move the iterate is rescaled to unit source norm.

The returned value is the ratio at an explicit feasible witness, hence a
certified lower bound on the supremum; nothing is claimed about global
optimality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .seqcore import LorentzParams, lorentz_norm_rows, lorentz_weights

RowFunctional = Callable[[np.ndarray], np.ndarray]

_DOWN = np.array([1.0, 0.5, 0.2, 0.05])
_UP = np.array([1.0, 0.3, 0.1, 0.03, 1e-2, 1e-3, 1e-4])


@dataclass
class AscentOptions:
    starts: int = 16
    max_iter: int = 10_000
    tol: float = 1e-9
    seed: int = 0
    keep: int = 3
    max_coords: int = 192

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.starts < 1 or self.max_iter < 1:
            raise ValueError("starts and max_iter must be >= 1")


@dataclass
class AscentResult:
    value: float
    witness: np.ndarray
    iterations: int
    converged: bool
    start_values: list = field(default_factory=list)


def coordinate_set(n: int, max_coords: int) -> np.ndarray:
    """Prefix lengths (0-based last index) used as coordinates."""
    if n <= max_coords:
        return np.arange(n)
    head = np.arange(min(max_coords // 6, n))
    rest = np.unique(np.round(np.geomspace(head.size + 1, n, max_coords - head.size)).astype(int) - 1)
    return np.unique(np.concatenate([head, rest[rest < n]]))


class RatioProblem:
    def __init__(self, numerator: RowFunctional, source: LorentzParams, n: int):
        self.numerator = numerator
        self.source = source
        self.n = n
        self.w = lorentz_weights(source, n)

    def src(self, X: np.ndarray) -> np.ndarray:
        return lorentz_norm_rows(X, self.source, self.w)

    def ratio(self, X: np.ndarray) -> np.ndarray:
        s = self.src(X)
        num = self.numerator(X)
        out = np.full(s.shape, -np.inf)
        ok = s > 0
        out[ok] = num[ok] / s[ok]
        return out


def _normalise(prob: RatioProblem, X: np.ndarray) -> np.ndarray:
    s = prob.src(X)
    s = np.where(s > 0, s, 1.0)
    return X / s[..., None]


def _sweep(prob: RatioProblem, X: np.ndarray, cur: np.ndarray, coords, refine: int):
    """One pass over all coordinates for a batch of iterates ``X`` (rows)."""
    n = prob.n
    B = X.shape[0]
    for j in coords:
        nxt = X[:, j + 1] if j + 1 < n else np.zeros(B)
        dj = X[:, j] - nxt
        top = X[:, 0]
        D = np.concatenate(
            [np.zeros((B, 1)), -dj[:, None] * _DOWN, top[:, None] * _UP, dj[:, None] * _DOWN[:2]],
            axis=1,
        )
        D.sort(axis=1)
        best_val = cur.copy()
        best_d = np.zeros(B)
        for r in range(refine + 1):
            C = np.repeat(X[:, None, :], D.shape[1], axis=1)
            C[:, :, : j + 1] += D[:, :, None]
            vals = prob.ratio(C)
            k = np.argmax(vals, axis=1)
            rows = np.arange(B)
            v = vals[rows, k]
            better = v > best_val
            best_val = np.where(better, v, best_val)
            best_d = np.where(better, D[rows, k], best_d)
            if r == refine:
                break
            lo = D[rows, np.maximum(k - 1, 0)]
            hi = D[rows, np.minimum(k + 1, D.shape[1] - 1)]
            D = lo[:, None] + (hi - lo)[:, None] * np.linspace(0.0, 1.0, 7)[None, :]
        move = (best_d != 0.0) & (best_val > cur * (1 + 1e-15))
        if move.any():
            X = X.copy()
            X[move, : j + 1] += best_d[move, None]
            np.maximum(X, 0.0, out=X)
            X[move] = _normalise(prob, X[move])
            cur = np.where(move, prob.ratio(X), cur)
    return X, cur


def _climb(prob: RatioProblem, X: np.ndarray, opts: AscentOptions, coords, sweeps: int, refine: int = 1):
    cur = prob.ratio(X)
    active = np.ones(X.shape[0], dtype=bool)
    iters = np.zeros(X.shape[0], dtype=int)
    it = 0
    while it < sweeps and active.any():
        it += 1
        idx = np.flatnonzero(active)
        Xa, new = _sweep(prob, X[idx], cur[idx], coords, refine)
        gain = (new - cur[idx]) / np.maximum(np.abs(cur[idx]), 1e-300)
        X[idx] = Xa
        cur[idx] = new
        iters[idx] += 1
        active[idx[gain < opts.tol]] = False
        # rows clearly behind the leader are not worth further sweeps
        active &= cur >= cur.max() * (1 - 1e-4)
    return X, cur, iters, ~active


def random_monotone_starts(rng: np.random.Generator, n: int, count: int) -> list[np.ndarray]:
    out = []
    for k in range(count):
        if k % 2 == 0:
            v = np.sort(np.abs(rng.standard_normal(n)))[::-1]
        else:
            rate = rng.uniform(0.05, 3.0)
            v = np.arange(1, n + 1, dtype=float) ** -rate
        out.append(v.copy())
    return out


def maximize_ratio(
    numerator: RowFunctional,
    source: LorentzParams,
    n: int,
    analytic_starts: Sequence[np.ndarray],
    opts: AscentOptions | None = None,
) -> AscentResult:
    """Best ratio over analytic and random starts.

    Every start gets one coarse screening sweep; the best ``opts.keep`` are then
    iterated to convergence (relative gain per sweep below ``opts.tol``).
    """
    opts = opts or AscentOptions()
    prob = RatioProblem(numerator, source, n)
    coords = coordinate_set(n, opts.max_coords)
    starts = [np.asarray(s, dtype=float) for s in analytic_starts]
    n_random = max(opts.starts - len(starts), 0)
    if n_random:
        child = np.random.SeedSequence(opts.seed).spawn(1)[0]
        starts += random_monotone_starts(np.random.default_rng(child), n, n_random)
    X = np.vstack([-np.sort(-np.abs(s)) for s in starts if np.any(s)])
    X = _normalise(prob, X)
    start_values = prob.ratio(X).tolist()

    # cheap screening pass on a coarse coordinate subset
    X, vals, _, _ = _climb(prob, X, opts, coordinate_set(n, 24), sweeps=1, refine=0)
    order = np.lexsort((np.arange(vals.size), -vals))[: opts.keep]
    Xk, vk, iters, conv = _climb(prob, X[order].copy(), opts, coords, sweeps=opts.max_iter)
    b = int(np.argmax(vk))
    converged = bool(conv[b])
    iterations = int(iters[b]) + 1 if converged else opts.max_iter
    return AscentResult(value=float(vk[b]), witness=Xk[b], iterations=iterations,
                        converged=converged, start_values=start_values)
