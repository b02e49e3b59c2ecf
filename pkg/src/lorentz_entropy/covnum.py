"""Certified packing/covering bounds on entropy numbers and separated families.

Lower bounds come from packings: if ``M > 2^{k-1}`` points of the source unit
ball are pairwise ``delta``-separated in the target quasi-norm with constant
``C``, two of them share a covering ball and ``e_k >= delta / (2C)``.

Upper bounds come from a cube cover: the cubes ``c + [-d/2, d/2]^n`` of a
(possibly shifted) lattice ``d Z^n`` that meet the interior of the source ball
cover it, and every point of such a cube is within target distance
``||(d/2) 1_n||_Y = phi_Y(n) d/2`` of the centre (lattice monotonicity).  If
at most ``2^{k-1}`` cubes are needed this radius bounds ``e_k`` from above.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .cells import EmbeddingSpec, NotAvailable, ell
from .seqcore import (
    LorentzParams,
    certified_quasi_constant,
    fundamental_phi,
    lorentz_norm_rows,
    lorentz_weights,
    sort_rows_desc,
)

POOL_CAP = 200_000
ENUM_GUARD = 10**8


# -- set families -----------------------------------------------------------

@dataclass
class SetFamily:
    """``M`` subsets of ``{0..n-1}`` of common size ``s``, stored as sorted rows."""

    sets: np.ndarray
    s: int
    n: int
    method: str = ""

    @property
    def M(self) -> int:
        return int(self.sets.shape[0])

    def as_lists(self, one_based: bool = True) -> list[list[int]]:
        off = 1 if one_based else 0
        return [[int(a) + off for a in row] for row in self.sets]


def required_size(n: int, s: int) -> int:
    """``ceil((n/(4s))^{s/2})``, the guaranteed family size."""
    return max(1, math.ceil((n / (4.0 * s)) ** (s / 2.0) - 1e-12))


def _primes_upto(m: int) -> list[int]:
    if m < 2:
        return []
    sieve = np.ones(m + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(m**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).tolist()


def _polynomial_family(n: int, s: int, M: int, rng: np.random.Generator) -> Optional[np.ndarray]:
    """Graphs ``{(i, f(i)): i < s}`` of polynomials of degree ``< ceil(s/2)`` over ``F_m``.

    Two distinct such polynomials agree in at most ``ceil(s/2) - 1 < s/2``
    points, which is exactly the intersection bound.  Needs a prime ``m`` with
    ``s <= m <= n/s`` and ``m^{ceil(s/2)} >= M``.
    """
    d = (s + 1) // 2
    primes = [m for m in _primes_upto(n // s) if m >= s]
    if not primes:
        return None
    m = primes[-1]
    if float(m) ** d < M:
        return None
    idx = np.arange(M, dtype=np.int64)
    coef = np.empty((M, d), dtype=np.int64)
    for j in range(d):
        coef[:, j] = idx % m
        idx //= m
    pts = np.arange(s, dtype=np.int64)
    vals = np.zeros((M, s), dtype=np.int64)
    for j in range(d - 1, -1, -1):  # Horner
        vals = (vals * pts[None, :] + coef[:, j : j + 1]) % m
    elems = pts[None, :] * m + vals
    perm = rng.permutation(n)
    return np.sort(perm[elems], axis=1)


def _greedy_accept(cands, n: int, s: int, M: int, limit_t: int, sets: list) -> list:
    """Accept candidates whose intersection with every accepted set is below ``limit_t``."""
    A = np.zeros((max(M, 1), n), dtype=np.int32)
    for i, row in enumerate(sets):
        A[i, row] = 1
    count = len(sets)
    for c in cands:
        if count >= M:
            break
        if count and np.max(A[:count, c].sum(axis=1)) >= limit_t:
            continue
        A[count, c] = 1
        sets.append(np.sort(np.asarray(c)))
        count += 1
    return sets


def combinatorial_family(n: int, s: int, seed: int = 0, target_M: Optional[int] = None) -> SetFamily:
    """``M >= ceil((n/(4s))^{s/2})`` sets of size ``s`` with pairwise intersections ``< s/2``.

    Uses a polynomial (Reed-Solomon type) construction when a suitable prime
    exists, then greedy rejection sampling, then for ``n <= 20`` a greedy scan
    of all ``s``-subsets in lexicographic order.
    """
    if not 1 <= s <= n:
        raise ValueError("need 1 <= s <= n")
    rng = np.random.default_rng(seed)
    need = required_size(n, s)
    goal = max(need, target_M or 0)
    if s == 1:
        return SetFamily(np.arange(n)[:, None], 1, n, "singletons")
    t = (s + 1) // 2  # smallest forbidden intersection size
    rows = _polynomial_family(n, s, goal, rng)
    if rows is not None:
        return SetFamily(rows, s, n, "polynomial")
    sets: list = []
    tries = 200 * goal
    batch = 256
    while tries > 0 and len(sets) < goal:
        m = min(batch, tries)
        cands = np.argsort(rng.random((m, n)), axis=1)[:, :s]
        sets = _greedy_accept(cands, n, s, goal, t, sets)
        tries -= m
    method = "rejection"
    if len(sets) < goal and n <= 20:
        sets = _greedy_accept(itertools.combinations(range(n), s), n, s, goal, t, sets)
        method = "rejection+exhaustive"
    if len(sets) < need:
        raise RuntimeError(f"combinatorial family for n={n}, s={s} stalled at {len(sets)} < {need}")
    return SetFamily(np.array(sets, dtype=np.int64).reshape(-1, s), s, n, method)


def max_pairwise_intersection_at_least(fam: SetFamily, t: int) -> bool:
    """Whether two distinct sets share at least ``t`` elements (exact check).

    Every ``t``-subset of every set is encoded as an integer; a repeated key
    means two sets share that ``t``-subset.
    """
    M, s = fam.sets.shape
    if t > s or M < 2:
        return False
    if t <= 0:
        return True
    base = fam.n
    if float(base) ** t >= 2**62:
        raise ValueError("key space too large for exact check")
    combos = list(itertools.combinations(range(s), t))
    keys = np.empty(len(combos) * M, dtype=np.int64)
    for c_i, c in enumerate(combos):
        k = np.zeros(M, dtype=np.int64)
        for col in c:
            k = k * base + fam.sets[:, col]
        keys[c_i * M : (c_i + 1) * M] = k
    keys.sort()
    return bool(np.any(keys[1:] == keys[:-1]))


def verify_set_family(fam: SetFamily) -> dict:
    """Check the three clauses: size bound, common cardinality, intersection bound."""
    n, s = fam.n, fam.s
    sizes_ok = bool(
        fam.sets.shape[1] == s
        and np.all(np.diff(fam.sets, axis=1) > 0)
        and fam.sets.min() >= 0
        and fam.sets.max() < n
    )
    t = (s + 1) // 2  # |T_i cap T_j| < s/2  iff  no shared t-subset
    return {
        "size": fam.M >= required_size(n, s),
        "cardinality": sizes_ok,
        "intersection": not max_pairwise_intersection_at_least(fam, t),
        "M": fam.M,
        "required": required_size(n, s),
    }


# -- point families ---------------------------------------------------------

@dataclass
class PointFamily:
    points: np.ndarray
    separation: float
    source_norm_bound: float
    meta: dict = field(default_factory=dict)


def _norms(X: np.ndarray, lp: LorentzParams, w=None) -> np.ndarray:
    return lorentz_norm_rows(sort_rows_desc(X), lp, w)


def min_pairwise_distance(X: np.ndarray, lp: LorentzParams, chunk: int = 64) -> float:
    """Smallest quasi-distance ``||x_i - x_j||`` over distinct rows."""
    M, n = X.shape
    w = lorentz_weights(lp, n)
    best = math.inf
    for i in range(0, M - 1, chunk):
        a = X[i : i + chunk]
        for j_off, row in enumerate(a):
            i0 = i + j_off
            rest = X[i0 + 1 :]
            if rest.size == 0:
                continue
            best = min(best, float(_norms(rest - row, lp, w).min()))
    return best


def indicator_family(spec: EmbeddingSpec, k: int, seed: int = 0, max_points: int = 2048) -> PointFamily:
    """Normalized indicators ``1_T / ||1_T||_source`` of a combinatorial family with ``s = ceil(l(k,n))``."""
    n = spec.n
    if not math.log(n + 1) <= k <= n:
        raise ValueError("indicator family needs ln(n+1) <= k <= n")
    s = min(n, math.ceil(ell(k, n)))
    want = min(2 ** (k - 1) + 1, max_points) if k < 62 else max_points
    fam = combinatorial_family(n, s, seed, target_M=want)
    rows = fam.sets[:max_points]
    A = np.zeros((rows.shape[0], n))
    np.put_along_axis(A, rows, 1.0, axis=1)
    scale = 1.0 / fundamental_phi(spec.source, s)
    # differences have entries +-scale on the symmetric difference
    inter = A @ A.T
    np.fill_diagonal(inter, -1)
    min_sym = int(2 * (s - inter.max())) if rows.shape[0] > 1 else 0
    sep = fundamental_phi(spec.target, min_sym) * scale if min_sym > 0 else 0.0
    return PointFamily(A * scale, sep, 1.0, {"s": s, "M_family": fam.M, "method": fam.method,
                                               "min_symmetric_difference": min_sym})


def dyadic_levels(n: int, k: int) -> tuple[int, int]:
    """``(mu, nu)``: smallest ``mu`` with ``k <= 4^mu/2`` and largest ``nu`` with ``12 4^nu <= n``."""
    nu = 0
    while 12 * 4 ** (nu + 1) <= n:
        nu += 1
    mu = 1
    while k > 4**mu / 2:
        mu += 1
    return mu, nu


def dyadic_block_norm(alpha, lp: LorentzParams) -> float:
    """Closed form ``(sum_l 4^{l u/p} |a_l|^u)^{1/u}`` (max form for ``u = inf``), levels ``l = 1..L``."""
    a = np.abs(np.asarray(alpha, dtype=float))
    lev = np.arange(1, a.size + 1, dtype=float)
    if not lp.u_finite:
        return float(np.max(4.0 ** (lev * lp.inv_p) * a))
    return float(np.sum(4.0 ** (lev * lp.u * lp.inv_p) * a**lp.u) ** (1.0 / lp.u))


def dyadic_family(p, n: int, k: int, u=2.0, v=1.0, seed: int = 0, max_points: int = 256,
                  max_tries: int = 200) -> PointFamily:
    """Vectors ``x^j = sum_l 4^{-l/p} 1_{T_j^l}`` over levels ``mu..nu``, rescaled into the source ball.

    Level ``l`` draws sets of size ``4^l`` inside its own block of ``3 4^l``
    indices; a new vector is kept only if on every level it meets each kept
    vector in at most ``4^l / 2`` indices.
    """
    src, tgt = LorentzParams(p, u), LorentzParams(p, v)
    mu, nu = dyadic_levels(n, k)
    if nu < 1 or mu > nu:
        raise NotAvailable(f"dyadic family needs mu <= nu (mu={mu}, nu={nu}, n={n}, k={k})")
    rng = np.random.default_rng(seed)
    levels = list(range(mu, nu + 1))
    starts, off = {}, 0
    for lv in levels:
        starts[lv] = off
        off += 3 * 4**lv
    want = min(2 ** (k - 1) + 1, max_points) if k < 62 else max_points
    chosen: dict = {lv: [] for lv in levels}
    tries = max_tries * want
    count = 0
    while count < want and tries > 0:
        tries -= 1
        cand = {}
        ok = True
        for lv in levels:
            size = 4**lv
            c = starts[lv] + rng.choice(3 * size, size, replace=False)
            if chosen[lv]:
                ind = np.zeros(n, dtype=np.int32)
                ind[c] = 1
                hits = np.asarray([ind[r].sum() for r in chosen[lv]])
                if hits.max() > size / 2:
                    ok = False
                    break
            cand[lv] = c
        if not ok:
            continue
        for lv in levels:
            chosen[lv].append(cand[lv])
        count += 1
    X = np.zeros((count, n))
    for j in range(count):
        for lv in levels:
            X[j, chosen[lv][j]] = 4.0 ** (-lv * src.inv_p)
    raw = _norms(X, src)
    X = X / raw.max()
    sep = min_pairwise_distance(X, tgt) if count > 1 else 0.0
    return PointFamily(X, sep, 1.0, {"mu": mu, "nu": nu, "raw_source_norms": raw,
                                     "levels": nu - mu + 1, "scale": float(raw.max())})


# -- packing lower bounds ---------------------------------------------------

@dataclass
class PackingResult:
    lower: float
    separation: float
    points: int
    c_target: float
    c_provenance: str
    diagnostic: str = ""


def _sphere_project(X: np.ndarray, src: LorentzParams) -> np.ndarray:
    nr = _norms(X, src)
    keep = nr > 0
    return X[keep] / nr[keep, None]


def candidate_pool(spec: EmbeddingSpec, size: int = 20_000, seed: int = 0) -> np.ndarray:
    """Points of the source unit ball used by greedy packing (deterministic given seed)."""
    src, n = spec.source, spec.n
    size = min(size, POOL_CAP)
    rng = np.random.default_rng(seed)
    parts = []
    # signed normalized indicators (extreme-point candidates)
    if 3**n <= 60_000:
        pats = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=n)))
        parts.append(_sphere_project(pats, src))
    else:
        for sz in sorted({1, 2, n // 4, n // 2, n} - {0}):
            m = 64
            sel = np.argsort(rng.random((m, n)), axis=1)[:, :sz]
            V = np.zeros((m, n))
            np.put_along_axis(V, sel, rng.choice((-1.0, 1.0), size=(m, sz)), axis=1)
            parts.append(_sphere_project(V, src))
    # dense grid of the ball and its radial projection onto the sphere
    if n <= 4:
        per = max(3, int((size / 2) ** (1.0 / n)))
        ax = np.linspace(-1.0, 1.0, per)
        G = np.stack(np.meshgrid(*([ax] * n), indexing="ij"), axis=-1).reshape(-1, n)
        inside = G[_norms(G, src) <= 1.0]
        parts.append(inside)
        parts.append(_sphere_project(G, src))
    # random directions with random sparsity and radius
    m = max(size - sum(len(p) for p in parts), size // 4)
    Z = rng.standard_normal((m, n))
    drop = rng.random((m, n)) < rng.random((m, 1)) * 0.8
    Z[drop] = 0.0
    Z = _sphere_project(Z, src)
    r = rng.random(len(Z)) ** (1.0 / n)
    r[: len(r) // 2] = 1.0
    parts.append(Z * r[:, None])
    pool = np.vstack(parts)
    return pool[:POOL_CAP]


def _greedy_order(pool: np.ndarray, tgt: LorentzParams, count: int, w) -> tuple[list, list]:
    """Farthest-point traversal from the point of largest target norm."""
    first = int(np.argmax(_norms(pool, tgt, w)))
    mind = _norms(pool - pool[first], tgt, w)
    order, seps = [first], [math.inf]
    for _ in range(1, min(count, pool.shape[0])):
        j = int(np.argmax(mind))
        d = float(mind[j])
        if d <= 0:
            break
        order.append(j)
        seps.append(min(seps[-1], d))
        mind = np.minimum(mind, _norms(pool - pool[j], tgt, w))
    return order, seps


def greedy_separations(pool: np.ndarray, tgt: LorentzParams, count: int) -> np.ndarray:
    """Entry ``m`` is the separation of the first ``m+1`` greedy points (entry 0 is ``inf``)."""
    w = lorentz_weights(tgt, pool.shape[1])
    return np.asarray(_greedy_order(pool, tgt, count, w)[1])


def _two_smallest(PD: np.ndarray):
    part = np.argpartition(PD, 1, axis=1)[:, :2]
    a = np.take_along_axis(PD, part, axis=1)
    swap = a[:, 0] > a[:, 1]
    part[swap] = part[swap][:, ::-1]
    a[swap] = a[swap][:, ::-1]
    return part[:, 0], a[:, 0], a[:, 1]


def refine_packing(pool: np.ndarray, sel: list, tgt: LorentzParams, max_swaps: int = 400) -> tuple[list, float]:
    """Swap search raising the minimum separation of the selected pool points.

    An endpoint of a closest pair is moved to the pool point farthest from the
    remaining selection whenever that strictly beats the current minimum, so
    the separation never decreases.
    """
    w = lorentz_weights(tgt, pool.shape[1])
    sel = list(sel)
    M = len(sel)
    if M < 3:
        D = _norms(pool[sel[0]] - pool[sel[1:]], tgt, w) if M == 2 else np.array([math.inf])
        return sel, float(D.min())
    PD = np.stack([_norms(pool - pool[j], tgt, w) for j in sel], axis=1)
    for _ in range(max_swaps):
        D = PD[sel].copy()
        np.fill_diagonal(D, math.inf)
        cur = float(D.min())
        a, b = np.unravel_index(int(np.argmin(D)), D.shape)
        arg1, m1, m2 = _two_smallest(PD)
        moved = False
        for i in (a, b):
            excl = np.where(arg1 == i, m2, m1)
            excl[sel] = -math.inf
            c = int(np.argmax(excl))
            if excl[c] > cur * (1 + 1e-12):
                sel[i] = c
                PD[:, i] = _norms(pool - pool[c], tgt, w)
                moved = True
                break
        if not moved:
            break
    D = PD[sel].copy()
    np.fill_diagonal(D, math.inf)
    return sel, float(D.min())


def _pairwise(X: np.ndarray, tgt: LorentzParams, w) -> np.ndarray:
    M = X.shape[0]
    D = np.empty((M, M))
    for i in range(M):
        D[i] = _norms(X - X[i], tgt, w)
    np.fill_diagonal(D, math.inf)
    return D


def spread_points(X: np.ndarray, src: LorentzParams, tgt: LorentzParams, seed: int = 0,
                  iters: Optional[int] = None, trials: int = 24) -> np.ndarray:
    """Stochastic local search raising the minimum target separation inside the source ball.

    A point of the closest pair is replaced by the best of ``trials`` random
    perturbations (pulled back into the ball) whenever its distance to all
    other points then exceeds the current minimum.
    """
    rng = np.random.default_rng(seed)
    n = X.shape[1]
    if iters is None:
        iters = 3000 + 40 * X.shape[0]
    wt = lorentz_weights(tgt, n)
    ws = lorentz_weights(src, n)
    X = X.copy()
    D = _pairwise(X, tgt, wt)
    step = 0.25 * float(D.min()) if np.isfinite(D.min()) else 0.1
    fails = 0
    for _ in range(iters):
        cur = float(D.min())
        a, b = np.unravel_index(int(np.argmin(D)), D.shape)
        i = (a, b)[rng.integers(2)]
        C = X[i] + step * rng.standard_normal((trials, n))
        nr = _norms(C, src, ws)
        C = C / np.maximum(nr, 1.0)[:, None]
        others = np.delete(X, i, axis=0)
        dist = _norms(others[None, :, :] - C[:, None, :], tgt, wt).min(axis=1)
        j = int(np.argmax(dist))
        if dist[j] > cur * (1 + 1e-12):
            X[i] = C[j]
            row = _norms(X - X[i], tgt, wt)
            row[i] = math.inf
            D[i] = row
            D[:, i] = row
            fails = 0
        else:
            fails += 1
            if fails >= 20:
                step *= 0.5
                fails = 0
                if step < 1e-6:
                    break
    return X


def certify_packing(X: np.ndarray, src: LorentzParams, tgt: LorentzParams) -> tuple[np.ndarray, float]:
    """Pull points into the source ball and return them with their exact minimum separation."""
    nr = _norms(X, src)
    X = X / np.maximum(nr, 1.0)[:, None]
    # guard against rounding just above 1
    X = X / np.maximum(_norms(X, src), 1.0)[:, None]
    if X.shape[0] < 2:
        return X, math.inf
    D = _pairwise(X, tgt, lorentz_weights(tgt, X.shape[1]))
    return X, float(D.min())


def packing_profile(spec: EmbeddingSpec, kmax: int, candidates: int = 20_000, seed: int = 0,
                    c_target: Optional[float] = None, refine: bool = True) -> list[PackingResult]:
    """Packing lower bounds for ``k = 1..kmax``.

    One greedy traversal of the candidate pool serves every ``k``; with
    ``refine`` each prefix is improved by swap search and continuous spreading.
    The reported separation is always recomputed from the final points.
    """
    if kmax > 24:
        raise ValueError("kmax too large for explicit packings")
    if c_target is None:
        c_target, prov = certified_quasi_constant(spec.target, spec.n, seed)
    else:
        prov = "given"
    src, tgt = spec.source, spec.target
    pool = candidate_pool(spec, candidates, seed)
    w = lorentz_weights(tgt, spec.n)
    order, seps = _greedy_order(pool, tgt, 2 ** (kmax - 1) + 1, w)
    out = []
    for k in range(1, kmax + 1):
        M = 2 ** (k - 1) + 1
        if len(order) < M:
            out.append(PackingResult(0.0, 0.0, len(order), c_target, prov,
                                     f"could not find {M} separated points"))
            continue
        X = pool[order[:M]]
        if refine:
            sel, _ = refine_packing(pool, order[:M], tgt)
            X = spread_points(pool[sel], src, tgt, seed + k)
        X, d = certify_packing(X, src, tgt)
        out.append(PackingResult(d / (2.0 * c_target), d, M, c_target, prov))
    return out


def packing_lower(spec: EmbeddingSpec, k: int, candidates: int = 20_000, seed: int = 0) -> PackingResult:
    """Certified lower bound ``delta / (2 C_target)`` from ``2^{k-1} + 1`` separated points."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return packing_profile(spec, k, candidates, seed)[k - 1]


# -- covering upper bounds --------------------------------------------------

@dataclass
class CoverResult:
    upper: float
    delta: float
    cubes: int
    offset: float
    diagnostic: str = ""


def count_cubes(src: LorentzParams, n: int, delta: float, offset: float = 0.0,
                guard: int = ENUM_GUARD) -> int:
    """Number of cubes ``c + [-delta/2, delta/2]^n``, ``c in delta (Z + offset)^n``, meeting the open ball.

    The point of a cube closest to the origin coordinatewise is
    ``max(|c| - delta/2, 0)``; by lattice monotonicity the cube meets the open
    ball iff that point has norm ``< 1`` (a tiny slack keeps borderline cubes).
    """
    h = delta / 2.0
    zmax = int(math.floor((1.0 + h) / delta - offset)) + 1
    zs = np.arange(-zmax - 1, zmax + 2) + offset
    cs = delta * zs
    cs = cs[np.abs(cs) - h < 1.0 + 1e-12]
    # fold the sign symmetry: distinct |c| with multiplicities
    absc, mult = np.unique(np.round(np.abs(cs), 12), return_counts=True)
    m = absc.size
    if math.comb(m + n - 1, n) > guard:
        raise NotAvailable("lattice enumeration exceeds the guard")
    y_axis = np.maximum(absc - h, 0.0)
    w = lorentz_weights(src, n)
    # enumerate non-decreasing index tuples only, weighting by the number of orderings
    idx = np.array(list(itertools.combinations_with_replacement(range(m), n)), dtype=np.int64)
    if idx.size == 0:
        return 0
    Y = y_axis[idx][:, ::-1]
    Y = -np.sort(-Y, axis=1)
    inside = lorentz_norm_rows(Y, src, w) < 1.0 + 1e-12
    if not inside.any():
        return 0
    idx = idx[inside]
    weights = np.prod(mult[idx], axis=1).astype(np.float64)
    # number of distinct orderings of each multiset of indices
    fact = np.array([math.factorial(i) for i in range(n + 1)], dtype=np.float64)
    perms = np.full(idx.shape[0], fact[n])
    for v in range(m):
        perms /= fact[np.count_nonzero(idx == v, axis=1)]
    return int(round(float(np.sum(weights * perms))))


def _delta_grid(ratio: float = 0.97, smallest: float = 1e-3) -> np.ndarray:
    geo = 2.0 * ratio ** np.arange(int(math.log(smallest / 2.0) / math.log(ratio)) + 1)
    # sides 2/m tile [-1,1] exactly; the nudge pushes boundary-touching cubes out of the count
    aligned = 2.0 / np.arange(1, 65) * (1.0 + 1e-9)
    return np.concatenate([geo, aligned])


def covering_profile(spec: EmbeddingSpec, kmax: int, guard: int = ENUM_GUARD,
                     extra_deltas=()) -> list[CoverResult]:
    """Best certified cube-cover radius for ``k = 1..kmax`` from one scan over ``delta``."""
    src, n = spec.source, spec.n
    phi_t = fundamental_phi(spec.target, n)
    budget = 2 ** (kmax - 1)
    best: list = [None] * kmax
    deltas = sorted(set(_delta_grid().tolist()) | {float(d) for d in extra_deltas}, reverse=True)
    for d in deltas:
        smallest = None
        for off in (0.0, 0.5):
            try:
                N = count_cubes(src, n, d, off, guard)
            except NotAvailable:
                continue
            smallest = N if smallest is None else min(smallest, N)
            radius = phi_t * d / 2.0
            for k in range(1, kmax + 1):
                if N <= 2 ** (k - 1) and (best[k - 1] is None or radius < best[k - 1].upper):
                    best[k - 1] = CoverResult(radius, d, N, off)
        if smallest is None or smallest > 4 * budget:
            break
    out = []
    for k in range(1, kmax + 1):
        if best[k - 1] is None:
            raise NotAvailable(f"no certifiable cover for k={k} within the enumeration guard")
        out.append(best[k - 1])
    # a cover with fewer cubes also serves larger k
    for k in range(1, kmax):
        if out[k - 1].upper < out[k].upper:
            out[k] = out[k - 1]
    return out


def covering_upper(spec: EmbeddingSpec, k: int, delta: Optional[float] = None,
                   guard: int = ENUM_GUARD) -> CoverResult:
    """Smallest certified cube-cover radius with at most ``2^{k-1}`` cubes."""
    if k < 1:
        raise ValueError("k must be >= 1")
    extra = () if delta is None else (float(delta),)
    if delta is not None and not delta > 0:
        raise ValueError("delta must be positive")
    return covering_profile(spec, k, guard, extra)[k - 1]
