import math

import numpy as np
import pytest

from lorentz_entropy.seqcore import LorentzParams, lorentz_norm
from lorentz_entropy.volume import (
    InsufficientSamples,
    RvEstimate,
    entropy_vol_lower,
    exact_volume,
    lorentz_ball_volume_mc,
    lp_ball_volume_exact,
    lq_containment_radius,
    rv,
    volume_envelope,
)

INF = math.inf
L = LorentzParams


def test_exact_volumes():
    assert lp_ball_volume_exact(2, 2) == pytest.approx(math.pi)
    assert lp_ball_volume_exact(1, 2) == pytest.approx(2.0)
    assert lp_ball_volume_exact(1, 5) == pytest.approx(2**5 / 120)
    assert lp_ball_volume_exact(INF, 3) == 8.0
    assert exact_volume(L(2, 1), 1) == 2.0
    assert exact_volume(L(2, 1), 3) is None


def test_quasi_ball_mc_within_three_se():
    est = lorentz_ball_volume_mc(L(0.5, 0.5), 2, 10**6, seed=42)
    assert abs(est.mean - lp_ball_volume_exact(0.5, 2)) <= 3 * est.std_error


@pytest.mark.parametrize("proposal", ["cube", "lq"])
def test_proposals_agree(proposal):
    lp = L(2, 1)
    a = lorentz_ball_volume_mc(lp, 4, 200_000, seed=3, proposal=proposal)
    b = lorentz_ball_volume_mc(lp, 4, 200_000, seed=4, proposal="auto")
    assert abs(a.mean - b.mean) <= 4 * math.hypot(a.std_error, b.std_error)


def test_mc_is_reproducible():
    a = lorentz_ball_volume_mc(L(INF, 2), 5, 100_000, seed=9)
    b = lorentz_ball_volume_mc(L(INF, 2), 5, 100_000, seed=9)
    c = lorentz_ball_volume_mc(L(INF, 2), 5, 100_000, seed=10)
    assert a == b
    assert a.hits != c.hits


def test_large_u_tends_to_cube():
    est = lorentz_ball_volume_mc(L(INF, 64), 4, 100_000, seed=1)
    assert est.mean >= 0.9 * 2**4


@pytest.mark.parametrize("p, u", [(2, 1), (0.5, 1), (1, INF), (INF, 2), (0.5, 3)])
@pytest.mark.parametrize("q", [1.0, 0.6, 0.3])
def test_containment_radius_is_certified(p, u, q):
    lp, n = L(p, u), 7
    R = lq_containment_radius(lp, n, q)
    rng = np.random.default_rng(0)
    for _ in range(300):
        x = rng.standard_normal(n) * rng.random(n) ** 3
        lhs = np.sum(np.abs(x) ** q) ** (1 / q)
        assert lhs <= R * lorentz_norm(x, lp) * (1 + 1e-12)


def test_envelope_examples():
    assert volume_envelope(L(2, 2), 16) == pytest.approx(0.25)
    assert volume_envelope(L(INF, 1), 1) == pytest.approx(1 / math.log(2))


def test_rv_and_lower_bound():
    assert rv(L(2, 1), L(2, 1), 4) == 1.0
    val = rv(L(1, 1), L(INF, INF), 2)
    assert val == pytest.approx(math.sqrt(2) / 2)
    est = rv(L(2, 1), L(2, 2), 3, samples=50_000, seed=5)
    assert isinstance(est, RvEstimate) and est.std_error > 0
    assert entropy_vol_lower(1, 4, 0.7) == pytest.approx(0.7)
    assert entropy_vol_lower(5, 4, 0.7) == pytest.approx(0.35)


def test_zero_hits_raise():
    with pytest.raises(InsufficientSamples):
        rv(L(0.5, 0.5), L(2, 1), 12, method="mc", samples=1, seed=0)
