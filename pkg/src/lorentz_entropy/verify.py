"""Verification suites: exact identities, certified brackets and frozen empirical bands.

Each suite returns a ``SuiteResult`` whose rows carry the measured quantity,
the limit it is compared against and a verdict.  Reports contain no timings,
so a fixed seed gives byte-identical output.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cells import EmbeddingSpec
from .covnum import combinatorial_family, covering_profile, packing_profile, verify_set_family
from .entropy import envelope_branches, envelope_lorentz, envelope_via_en
from .interp import InterpPair, k_functional_l1_linf, k_functional_numeric, theta_u_norm
from .opnorm import embedding_norm_numeric
from .seqcore import (
    LorentzParams,
    _sample_vectors,
    harmonic,
    lorentz_norm,
    quasi_constant_estimate,
    rearrange,
    tail_bound,
    tail_sums_upto,
)
from .sparse import sigma_s, trunc_u
from .volume import (
    entropy_vol_lower,
    exact_volume,
    lorentz_ball_volume_mc,
    lp_ball_volume_exact,
    rv,
    rv_value,
    volume_envelope,
)

INF = math.inf

# one representative embedding per case cell; case 0 appears with p < q and p > q
CELL_SPECS = {
    "0<": ((1, 2), (2, 1)),
    "0>": ((2, 1), (1, 2)),
    "I": ((INF, 1), (2, 2)),
    "II": ((2, 1), (INF, 2)),
    "III.1": ((2, 1), (2, 2)),
    "III.2": ((2, INF), (2, 1)),
    "IV.1": ((INF, 2), (INF, 1)),
    "IV.2": ((INF, 1), (INF, 2)),
}

# frozen fixtures, measured at seed 42 and widened by 10%
REITERATION_BANDS = {
    (0.25, 0.5): (21.0, 124.0),
    (0.25, 1.0): (3.75, 5.85),
    (0.25, 2.0): (1.48, 2.71),
    (0.25, INF): (0.90, 2.22),
    (0.5, 0.5): (8.8, 70.0),
    (0.5, 1.0): (2.06, 4.38),
    (0.5, 2.0): (1.27, 1.87),
    (0.5, INF): (0.90, 1.76),
    (0.75, 0.5): (10.2, 124.0),
    (0.75, 1.0): (1.89, 5.85),
    (0.75, 2.0): (1.12, 1.84),
    (0.75, INF): (0.90, 1.32),
}
TAIL_RATIO_MAX = {"power": 2.75, "log": 2.65}

SIGMA_TARGETS = ((2, 1), (2, INF), (INF, 1), (INF, 2), (1, 2), (0.5, 1), (2, 2))


@dataclass
class Row:
    item: str
    measured: float
    limit: float
    ok: bool


@dataclass
class SuiteResult:
    criterion: int
    title: str
    rows: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    def add(self, item: str, measured: float, limit: float, ok: bool):
        self.rows.append(Row(item, float(measured), float(limit), bool(ok)))


def _fmt(a) -> str:
    return "inf" if math.isinf(a) else f"{a:g}"


def _spec(cell: str, n: int) -> EmbeddingSpec:
    (p, u), (q, v) = CELL_SPECS[cell]
    return EmbeddingSpec.of(p, u, q, v, n)


def suite_opnorm(seed: int = 42) -> SuiteResult:
    res = SuiteResult(1, "exact operator norm H_n^(1/v-1/u)")
    for p in (0.5, 1.0, 2.0, INF):
        for u, v in ((2.0, 1.0), (INF, 1.0), (INF, 2.0)):
            worst, at = 0.0, 1
            for n in range(1, 101):
                r = embedding_norm_numeric(EmbeddingSpec.of(p, u, p, v, n), seed=seed)
                exact = harmonic(n) ** (1.0 / v - (0.0 if math.isinf(u) else 1.0 / u))
                err = abs(r.value - exact) / exact
                if err > worst:
                    worst, at = err, n
            res.add(f"p={_fmt(p)} u={_fmt(u)} v={_fmt(v)} worst_n={at}", worst, 1e-6, worst <= 1e-6)
    return res


def suite_sigma_inf(seed: int = 42) -> SuiteResult:
    res = SuiteResult(2, "sigma_s in l_inf equals x*_{s+1}")
    rng = np.random.default_rng(seed)
    tgt = LorentzParams(INF, INF)
    mismatches = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 129))
        s = int(rng.integers(0, n + 1))
        x = _sample_vectors(rng, 1, n)[0]
        xs = rearrange(x)
        expect = float(xs[s]) if s < n else 0.0
        if sigma_s(x, s, tgt) != expect:
            mismatches += 1
    res.add("mismatches over 10000 vectors", mismatches, 0, mismatches == 0)
    return res


def suite_doubling(seed: int = 42) -> SuiteResult:
    res = SuiteResult(3, "sigma_s <= trunc_u and trunc_u(2s) <= 2 C sigma_s")
    for j, (p, u) in enumerate(SIGMA_TARGETS):
        tgt = LorentzParams(p, u)
        c_hat = quasi_constant_estimate(tgt, 128, 4000, seed).c_quasi
        rng = np.random.default_rng(seed + j)
        order_bad, worst = 0, 0.0
        for _ in range(10_000):
            n = int(rng.integers(3, 129))
            # s < n/2 so that 2s stays inside the vector
            s = int(rng.integers(1, (n - 1) // 2 + 1))
            x = _sample_vectors(rng, 1, n)[0]
            sg = sigma_s(x, s, tgt)
            if sg > trunc_u(x, s, tgt):
                order_bad += 1
            if sg > 0:
                worst = max(worst, trunc_u(x, 2 * s, tgt) / (2.0 * c_hat * sg))
        name = f"target=({_fmt(p)},{_fmt(u)})"
        res.add(f"{name} sigma>trunc count", order_bad, 0, order_bad == 0)
        res.add(f"{name} max trunc(2s)/(2 C sigma) C={c_hat:.6g}", worst, 1.0, worst <= 1.0)
        res.constants[name] = c_hat
    return res


def volume_band_cells() -> list[tuple[float, float]]:
    """Lorentz spaces whose volume band is checked: every space used by ``CELL_SPECS``."""
    cells = []
    for a, b in CELL_SPECS.values():
        for c in (a, b):
            if c not in cells:
                cells.append(c)
    return cells


def suite_volume(seed: int = 42, samples: int = 1_000_000) -> SuiteResult:
    res = SuiteResult(4, "ball volumes: Monte Carlo vs Gamma formula, envelope band")
    for p in (0.5, 1.0, 2.0, 4.0):
        lp = LorentzParams.lp(p)
        for n in range(2, 9):
            est = lorentz_ball_volume_mc(lp, n, samples, seed)
            exact = lp_ball_volume_exact(p, n)
            # a degenerate proposal (hit fraction 1) has zero error and is exact
            z = abs(est.mean - exact) / est.std_error if est.std_error > 0 else abs(est.mean - exact) / exact * 1e12
            res.add(f"l_{_fmt(p)} n={n} |mc-exact|/se", z, 3.0, z <= 3.0)
    cells = [(p, p) for p in (0.5, 1.0, 2.0, 4.0)]
    cells += [c for c in volume_band_cells() if c not in cells]
    for p, u in cells:
        lp = LorentzParams(p, u)
        vals = []
        for n in range(2, 11):
            v = exact_volume(lp, n)
            if v is None:
                est = lorentz_ball_volume_mc(lp, n, samples, seed)
                v = est.mean
            vals.append(v ** (1.0 / n) / volume_envelope(lp, n) if v > 0 else math.nan)
        spread = max(vals) / min(vals) if all(np.isfinite(vals)) else math.inf
        res.add(f"({_fmt(p)},{_fmt(u)}) band max/min n=2..10", spread, 4.0, spread <= 4.0)
    return res


def suite_brackets(seed: int = 42) -> SuiteResult:
    res = SuiteResult(5, "micro brackets: vol <= packing <= covering, per-cell constant")
    for cell in CELL_SPECS:
        worst_c = 1.0
        for n in (2, 3):
            spec = _spec(cell, n)
            kmax = 3 * n
            packs = packing_profile(spec, kmax, seed=seed)
            covers = covering_profile(spec, kmax)
            r = rv_value(rv(spec.source, spec.target, n, samples=200_000, seed=seed))
            for k in range(1, kmax + 1):
                vl = entropy_vol_lower(k, n, r)
                pl, cu = packs[k - 1].lower, covers[k - 1].upper
                res.add(f"{cell} n={n} k={k} vol_lower/packing", vl / pl, 1.0, vl <= pl)
                res.add(f"{cell} n={n} k={k} packing/covering", pl / cu, 1.0, pl <= cu)
                env = envelope_lorentz(spec, k).value
                lower = max(vl, pl)
                worst_c = max(worst_c, env / lower, cu / env)
        res.add(f"{cell} constant C", worst_c, 64.0, worst_c <= 64.0)
        res.constants[cell] = worst_c
    return res


def suite_junctions(seed: int = 42) -> SuiteResult:
    res = SuiteResult(6, "envelope regime junctions")
    for cell in CELL_SPECS:
        for n in (16, 256, 4096):
            spec = _spec(cell, n)
            k1 = math.ceil(math.log(n + 1))
            _, b1 = envelope_branches(spec, k1)
            _, b2 = envelope_branches(spec, n)
            j1 = max(b1["small-k"], b1["mid-k"]) / min(b1["small-k"], b1["mid-k"])
            j2 = max(b2["mid-k"], b2["large-k"]) / min(b2["mid-k"], b2["large-k"])
            res.add(f"{cell} n={n} small/mid at k={k1}", j1, 8.0, j1 <= 8.0)
            res.add(f"{cell} n={n} mid/large at k={n}", j2, 8.0, j2 <= 8.0)
    return res


def suite_en_reduction(seed: int = 42) -> SuiteResult:
    res = SuiteResult(7, "reduction through the truncation functional")
    for cell in ("II", "III.2", "IV.2"):
        for n in (64, 512):
            spec = _spec(cell, n)
            lo, hi = math.inf, 0.0
            for k in range(math.ceil(math.log(n)), n // 2):
                r = envelope_via_en(spec, k).value / envelope_lorentz(spec, k).value
                lo, hi = min(lo, r), max(hi, r)
            res.add(f"{cell} n={n} min ratio", lo, 1.0 / 8.0, lo >= 1.0 / 8.0)
            res.add(f"{cell} n={n} max ratio", hi, 8.0, hi <= 8.0)
    return res


def suite_set_family(seed: int = 42) -> SuiteResult:
    res = SuiteResult(8, "constant-weight set families with small intersections")
    for n, s in ((64, 4), (256, 6), (1024, 8)):
        fam = combinatorial_family(n, s, seed=seed)
        rep = verify_set_family(fam)
        ok = rep["size"] and rep["cardinality"] and rep["intersection"]
        res.add(f"n={n} s={s} M ({fam.method})", rep["M"], rep["required"], bool(ok))
    return res


def suite_interpolation(seed: int = 42) -> SuiteResult:
    res = SuiteResult(9, "K-functional and reiteration band")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 33))
        x = _sample_vectors(rng, 1, n)[0]
        t = float(rng.uniform(0.05, n + 1.0))
        a = k_functional_numeric(x, t, InterpPair.l1_linf(n)).value
        b = k_functional_l1_linf(x, t)
        worst = max(worst, abs(a - b) / b)
    res.add("numeric vs closed form max rel err", worst, 1e-6, worst <= 1e-6)
    for (theta, u), (lo, hi) in REITERATION_BANDS.items():
        rng = np.random.default_rng(seed)
        target = LorentzParams(1.0 / (1.0 - theta), u)
        rs = []
        for _ in range(1000):
            n = int(rng.integers(1, 33))
            x = _sample_vectors(rng, 1, n)[0]
            rs.append(theta_u_norm(x, theta, u, InterpPair.l1_linf(n)) / lorentz_norm(x, target))
        name = f"theta={theta:g} u={_fmt(u)}"
        res.add(f"{name} min ratio", min(rs), lo, min(rs) >= lo)
        res.add(f"{name} max ratio", max(rs), hi, max(rs) <= hi)
    return res


def suite_tails(seed: int = 42) -> SuiteResult:
    res = SuiteResult(10, "tail sums against their envelopes")
    for variant, lams in (("power", (0.5, 1.0, 2.0)), ("log", (1.5, 2.0, 3.0))):
        for lam in lams:
            worst = 0.0
            for s in range(2, 65):
                sums = tail_sums_upto(4096, s, lam, variant)
                # entry j is n = s + 1 + j, so n = 2s starts at j = s - 1
                worst = max(worst, float(np.max(sums[s - 1:])) / tail_bound(s, lam, variant))
            lim = TAIL_RATIO_MAX[variant]
            res.add(f"{variant} lambda={lam:g} max exact/envelope", worst, lim, worst <= lim)
    return res


SUITES: dict[str, tuple[int, Callable[[int], SuiteResult]]] = {
    "opnorm": (1, suite_opnorm),
    "sigma": (2, suite_sigma_inf),
    "doubling": (3, suite_doubling),
    "volume": (4, suite_volume),
    "brackets": (5, suite_brackets),
    "junctions": (6, suite_junctions),
    "en": (7, suite_en_reduction),
    "sets": (8, suite_set_family),
    "interp": (9, suite_interpolation),
    "tails": (10, suite_tails),
}

# suites rerun by the reproducibility check; the expensive ones are left to an external rerun
REPRO_SUITES = ("sigma", "doubling", "sets", "interp", "tails")


def suite_names(token: str) -> list[str]:
    """Resolve ``all``, a comma list of names or criterion numbers."""
    if token == "all":
        return list(SUITES) + ["repro"]
    by_number = {str(num): name for name, (num, _) in SUITES.items()}
    by_number["11"] = "repro"
    out = []
    for part in token.split(","):
        part = part.strip()
        name = by_number.get(part, part)
        if name not in SUITES and name != "repro":
            raise ValueError(f"unknown suite {part!r}")
        out.append(name)
    return out


def render(results: list[SuiteResult]) -> str:
    lines = ["criterion,suite,item,measured,limit,verdict"]
    for r in results:
        for row in r.rows:
            item = row.item.replace(",", ";")
            lines.append(f"{r.criterion},{r.title.replace(',', ';')},{item},"
                         f"{row.measured:.17g},{row.limit:.17g},{'pass' if row.ok else 'fail'}")
    return "\n".join(lines) + "\n"


def suite_repro(seed: int = 42) -> SuiteResult:
    res = SuiteResult(11, "reproducibility of seeded suites")
    for name in REPRO_SUITES:
        fn = SUITES[name][1]
        a, b = render([fn(seed)]), render([fn(seed)])
        res.add(f"{name} identical reruns", 0.0 if a == b else 1.0, 0.0, a == b)
    return res


def run_suite(name: str, seed: int = 42) -> SuiteResult:
    if name == "repro":
        return suite_repro(seed)
    return SUITES[name][1](seed)


def run_suites(names, seed: int = 42, timings: Optional[dict] = None) -> list[SuiteResult]:
    """Run suites in order; wall times go to ``timings`` (never into the report)."""
    out = []
    for name in names:
        t0 = time.perf_counter()
        out.append(run_suite(name, seed))
        if timings is not None:
            timings[name] = time.perf_counter() - t0
    return out
