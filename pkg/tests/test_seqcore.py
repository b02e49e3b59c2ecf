import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentz_entropy.seqcore import (
    LorentzParams,
    aoki_rolewicz_p,
    certified_quasi_constant,
    fundamental_phi,
    fundamental_proxy,
    harmonic,
    lorentz_norm,
    lorentz_norm_rows,
    lp_norm,
    parse_extended,
    quasi_constant_estimate,
    rearrange,
    sort_rows_desc,
    tail_bound,
    tail_sum,
    tail_sums_upto,
    xstar_envelope,
)

INF = math.inf
L = LorentzParams

vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=1, max_size=24)
exponents = st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0, INF])


@pytest.mark.parametrize("x, expect", [
    ((3, -1, 2), (3, 2, 1)),
    ((0, 0), (0, 0)),
    ((-5, -5, 1), (5, 5, 1)),
])
def test_rearrange_examples(x, expect):
    assert rearrange(x).tolist() == list(expect)


def test_rearrange_rejects_bad_input():
    with pytest.raises(ValueError):
        rearrange([])
    with pytest.raises(ValueError):
        rearrange([1.0, math.nan])


@pytest.mark.parametrize("x, p, u, expect", [
    ((1, 1, 1, 1), 2, 2, 2.0),
    ((1, 1, 1), 1, INF, 3.0),
    ((1, 1, 1), INF, 1, 11 / 6),
    ((1, 0, 0, 0, 0), 0.5, 3, 1.0),
    ((1, 0), INF, INF, 1.0),
])
def test_norm_examples(x, p, u, expect):
    assert lorentz_norm(x, L(p, u)) == pytest.approx(expect, rel=1e-15)


def test_params_parse_inf_and_fractions():
    assert parse_extended("inf") == INF
    assert parse_extended("1/2") == 0.5
    lp = L("inf", "2")
    assert math.isinf(lp.p) and lp.u == 2.0
    assert lp.inv_p == 0.0
    with pytest.raises(ValueError):
        L(0, 1)
    with pytest.raises(ValueError):
        L(1, -2)


@given(vectors, exponents)
def test_lebesgue_case_matches_lp(x, p):
    if not any(x):
        return
    assert lorentz_norm(x, L(p, p)) == pytest.approx(lp_norm(x, p), rel=1e-12)


@given(vectors, exponents, exponents, st.floats(0.01, 100))
def test_homogeneous_and_symmetric(x, p, u, c):
    lp = L(p, u)
    a = lorentz_norm(x, lp)
    assert lorentz_norm([c * t for t in x], lp) == pytest.approx(c * a, rel=1e-12, abs=1e-300)
    assert lorentz_norm(list(reversed([-t for t in x])), lp) == pytest.approx(a, rel=1e-14, abs=1e-300)


@given(vectors, exponents, exponents, st.integers(0, 10**6))
def test_lattice_monotone(x, p, u, seed):
    rng = np.random.default_rng(seed)
    y = np.asarray(x) * rng.random(len(x))
    lp = L(p, u)
    assert lorentz_norm(y, lp) <= lorentz_norm(x, lp) * (1 + 1e-12) + 1e-300


def test_rows_agree_with_scalar():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((50, 17)) * np.exp(rng.uniform(-200, 200, (50, 1)))
    for lp in (L(2, 1), L(0.5, 3), L(INF, 2), L(1, INF)):
        rows = lorentz_norm_rows(sort_rows_desc(X), lp)
        scalar = np.array([lorentz_norm(x, lp) for x in X])
        np.testing.assert_allclose(rows, scalar, rtol=1e-12)


def test_fundamental_functions():
    assert fundamental_phi(L(2, 2), 9) == pytest.approx(3.0)
    assert fundamental_proxy(L(2, 2), 9) == pytest.approx(3.0)
    assert fundamental_phi(L(INF, 1), 3) == pytest.approx(11 / 6)
    assert fundamental_phi(L(INF, 2), 3) == pytest.approx(math.sqrt(11 / 6))
    assert fundamental_phi(L(1, INF), 5) == pytest.approx(5.0)


def test_harmonic():
    assert harmonic(1) == 1.0
    assert harmonic(3) == pytest.approx(11 / 6, rel=1e-16)
    with pytest.raises(ValueError):
        harmonic(0)


def test_xstar_envelope():
    assert xstar_envelope(L(2, 7), 4) == pytest.approx(0.5)
    assert xstar_envelope(L(INF, 1), 1) == pytest.approx(1 / math.log(2))


@pytest.mark.parametrize("c, p", [(1.0, 1.0), (2.0, 0.5)])
def test_aoki_rolewicz_examples(c, p):
    assert aoki_rolewicz_p(c) == pytest.approx(p)


@pytest.mark.parametrize("r", [0.25, 0.5, 0.75])
def test_aoki_rolewicz_round_trip(r):
    assert aoki_rolewicz_p(2 ** (1 / r - 1)) == pytest.approx(r, rel=1e-14)


def test_quasi_constants():
    est = quasi_constant_estimate(L(2, 1), 16, 500, seed=1)
    assert est.c_quasi == pytest.approx(1.0, abs=1e-12)
    # disjoint indicators already force about phi(2s)/(2 phi(s)) -> 2 for l_{1/2,1}
    est = quasi_constant_estimate(L(0.5, 1), 64, 500, seed=1)
    assert est.c_quasi > 1.9
    assert certified_quasi_constant(L(2, 2), 8) == (1.0, "norm")
    c, tag = certified_quasi_constant(L(0.5, 0.5), 8)
    assert c == pytest.approx(2.0) and tag == "p-norm"


def test_tail_sums():
    assert tail_sum(3, 1, 1.0) == pytest.approx(1 / 2 + 1 / 2 * 1 / 3)
    sums = tail_sums_upto(40, 3, 2.0, "log")
    for n in (4, 17, 40):
        assert sums[n - 4] == pytest.approx(tail_sum(n, 3, 2.0, "log"), rel=1e-13)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        assert tail_sum(5, 5, 1.0) == 0.0
    assert w
    with pytest.raises(ValueError):
        tail_sum(4, 5, 1.0)
    with pytest.raises(ValueError):
        tail_bound(3, 1.0, "log")
    assert tail_bound(3, 2.0, "power") == pytest.approx(math.log(4) / 9)


# sup of x*_i over the unit ball is 1/phi(i); its ratio to the envelope, max over i <= 2000
XSTAR_CONSTANTS = {(2, 1): 1.0, (2, INF): 1.0, (0.5, 1): 2.0, (INF, 1): 0.93, (INF, 2): 0.97, (1, 2): 1.42}


@pytest.mark.parametrize("cell", list(XSTAR_CONSTANTS))
def test_xstar_decay_constant(cell):
    lp = L(*cell)
    worst = max(1 / fundamental_phi(lp, i) / xstar_envelope(lp, i) for i in range(1, 2001))
    assert worst <= XSTAR_CONSTANTS[cell] * (1 + 1e-12)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(50)
    xs = rearrange(x) / lorentz_norm(x, lp)
    assert all(xs[i - 1] <= XSTAR_CONSTANTS[cell] * xstar_envelope(lp, i) * (1 + 1e-12) for i in range(1, 51))
