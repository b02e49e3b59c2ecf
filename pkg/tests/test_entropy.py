import math

import pytest

from lorentz_entropy.cells import EmbeddingSpec, NotAvailable
from lorentz_entropy.entropy import (
    EntropyBracket,
    envelope_branches,
    envelope_lorentz,
    envelope_lp,
    envelope_via_en,
    large_k_envelope,
    upper_identity,
)

INF = math.inf


def test_lp_envelope():
    e = envelope_lp(1, 2, 64, 10)
    assert e.case_tag == "classical-le" and e.regime == "mid-k"
    assert e.value == pytest.approx((math.log(64 / 10 + 1) / 10) ** 0.5)
    assert envelope_lp(1, 2, 64, 2).value == 1.0
    e = envelope_lp(2, 1, 64, 10)
    assert e.case_tag == "classical-ge"
    assert e.value == pytest.approx(2 ** (-10 / 64) * 64**0.5)


def test_case_examples():
    assert envelope_lorentz(EmbeddingSpec.of(3, 1, 3, 2, 50), 50).value == pytest.approx(0.5)
    e = envelope_lorentz(EmbeddingSpec.of(2, 2, 2, 1, 1024), 32)
    assert e.case_tag == "III.2"
    assert e.value == pytest.approx(math.log(33) ** 0.5, rel=1e-12)
    e = envelope_lorentz(EmbeddingSpec.of(INF, 2, INF, 2, 40), 7)
    assert e.value == pytest.approx(2 ** (-7 / 40))
    n = 100
    e = envelope_lorentz(EmbeddingSpec.of(INF, 1, 1, 1, n), n)
    assert e.value == pytest.approx(0.5 * n / math.log(n + 1))


def test_case_zero_matches_classical():
    for k in (1, 3, 20, 64, 200):
        a = envelope_lorentz(EmbeddingSpec.of(1, 3, 2, 0.5, 64), k)
        b = envelope_lp(1, 2, 64, k)
        assert a.value == b.value and a.regime == b.regime


def test_branches_pick_regime():
    spec = EmbeddingSpec.of(2, 1, INF, 2, 256)
    for k in (2, 30, 300):
        case, br = envelope_branches(spec, k)
        e = envelope_lorentz(spec, k)
        assert case == "II" and br[e.regime] == e.value


def test_via_en_domain():
    spec = EmbeddingSpec.of(INF, 1, INF, 2, 64)
    assert envelope_via_en(spec, 10).value > 0
    with pytest.raises(NotAvailable):
        envelope_via_en(spec, 32)


def test_identity_upper():
    assert upper_identity(1, 10, 1) == 4.0
    assert upper_identity(0.5, 10, 11) == pytest.approx(8.0)
    with pytest.raises(ValueError):
        upper_identity(1.5, 10, 1)


def test_large_k():
    spec = EmbeddingSpec.of(INF, 1, INF, 2, 3)
    assert large_k_envelope(spec, 3) == pytest.approx(0.5 * (11 / 6) ** -0.5)
    same = EmbeddingSpec.of(2, 1, 2, 1, 8)
    assert large_k_envelope(same, 12) == pytest.approx(2 ** (-12 / 8))
    with pytest.raises(ValueError):
        large_k_envelope(spec, 2)


def test_bracket_validation():
    b = EntropyBracket(0.1, 0.5, "packing", "cover", 2, 3)
    assert b.lower < b.upper
    with pytest.raises(ValueError):
        EntropyBracket(0.6, 0.5, "packing", "cover", 2, 3)
