import itertools
import math

import numpy as np
import pytest

from lorentz_entropy.cells import EmbeddingSpec, case_of, ell, regime_of
from lorentz_entropy.opnorm import embedding_norm_envelope, embedding_norm_exact, embedding_norm_numeric
from lorentz_entropy.seqcore import LorentzParams, harmonic, lorentz_norm

INF = math.inf


def spec(p, u, q, v, n):
    return EmbeddingSpec.of(p, u, q, v, n)


def test_exact_examples():
    assert embedding_norm_exact(spec(2, 2, 2, 1, 3)).value == pytest.approx(math.sqrt(11 / 6), rel=1e-15)
    assert embedding_norm_exact(spec(2, 1, 2, 1, 7)).value == 1.0
    assert embedding_norm_exact(spec(1, INF, 1, 1, 1)).value == pytest.approx(1.0)
    assert embedding_norm_exact(spec(1, 2, 2, 1, 5)) is None


def test_exact_witness_attains_value():
    s = spec(INF, 3, INF, 1.5, 20)
    r = embedding_norm_exact(s)
    assert r.witness_ratio(s) == pytest.approx(r.value, rel=1e-12)


def test_numeric_l1_into_l2():
    r = embedding_norm_numeric(spec(1, 1, 2, 2, 6))
    assert r.value == pytest.approx(1.0, rel=1e-9)


def test_numeric_matches_grid_brute_force():
    s = spec(2, INF, 2, 1, 4)
    # monotone vectors with entries on a 4-level grid
    levels = np.linspace(0.0, 1.0, 21)
    best = 0.0
    for x in itertools.combinations_with_replacement(levels[::-1], 4):
        if x[0] == 0:
            continue
        best = max(best, lorentz_norm(x, s.target) / lorentz_norm(x, s.source))
    r = embedding_norm_numeric(s)
    assert r.value >= best - 1e-12
    assert r.value == pytest.approx(harmonic(4), rel=1e-9)
    assert r.witness_ratio(s) == pytest.approx(r.value, rel=1e-12)


def test_numeric_is_a_lower_bound_from_its_witness():
    s = spec(0.5, 2, 3, 1, 12)
    r = embedding_norm_numeric(s, starts=4)
    assert lorentz_norm(r.witness, s.source) == pytest.approx(1.0)
    assert r.witness_ratio(s) == pytest.approx(r.value, rel=1e-12)


def test_envelope_examples():
    e = embedding_norm_envelope(spec(1, 1, 2, 2, 16))
    assert e.value == pytest.approx(1.0) and e.case_tag == "0"
    e = embedding_norm_envelope(spec(2, 2, 2, 1, 3))
    assert e.value == pytest.approx(math.sqrt(math.log(4)))


@pytest.mark.parametrize("src, tgt, case", [
    ((1, 2), (2, 1), "0"),
    ((INF, 1), (2, 2), "I"),
    ((2, 1), (INF, 2), "II"),
    ((2, 1), (2, 2), "III.1"),
    ((2, 2), (2, 1), "III.2"),
    ((INF, 2), (INF, 1), "IV.1"),
    ((INF, 1), (INF, 2), "IV.2"),
])
def test_case_cells(src, tgt, case):
    assert case_of(LorentzParams(*src), LorentzParams(*tgt)) == case


def test_regimes_and_ell():
    assert regime_of(1, 16) == "small-k"
    assert regime_of(3, 16) == "mid-k"
    assert regime_of(16, 16) == "mid-k"
    assert regime_of(17, 16) == "large-k"
    assert ell(16, 16) == pytest.approx(16 / math.log(2))
    with pytest.raises(ValueError):
        ell(0, 4)
