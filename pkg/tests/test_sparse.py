import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lorentz_entropy.ascent import AscentOptions
from lorentz_entropy.cells import EmbeddingSpec, NotAvailable, ell
from lorentz_entropy.seqcore import LorentzParams, lorentz_norm
from lorentz_entropy.sparse import (
    s_of_k,
    sigma_s,
    sigma_sup,
    sigma_sup_numeric,
    sterm_bound,
    trunc_u,
    u_sup,
    u_sup_envelope,
    u_sup_numeric,
)

INF = math.inf
L = LorentzParams
LINF = L(INF, INF)


def test_sigma_examples():
    assert sigma_s((3, 2, 1), 1, LINF) == 2.0
    x = (4, -1, 2, 0.5)
    assert sigma_s(x, 0, L(2, 1)) == pytest.approx(lorentz_norm(x, L(2, 1)))
    assert sigma_s(x, 4, L(2, 1)) == 0.0
    with pytest.raises(ValueError):
        sigma_s(x, 5, L(2, 1))


def test_trunc_example():
    # entries capped at x*_2 = 2: (2, 2, 1)
    assert trunc_u((3, 2, 1), 2, L(1, 1)) == pytest.approx(5.0)
    with pytest.raises(ValueError):
        trunc_u((3, 2, 1), 0, L(1, 1))


vectors = st.lists(st.floats(-100, 100, allow_nan=False), min_size=2, max_size=40)


@given(vectors, st.data())
def test_sigma_below_trunc(x, data):
    s = data.draw(st.integers(1, len(x)))
    for tgt in (L(2, 1), L(INF, 2), L(0.5, 3)):
        assert sigma_s(x, s, tgt) <= trunc_u(x, s, tgt) * (1 + 1e-12) + 1e-300


@given(vectors, st.data())
def test_sigma_linf_is_next_entry(x, data):
    s = data.draw(st.integers(0, len(x) - 1))
    assert sigma_s(x, s, LINF) == sorted(map(abs, x), reverse=True)[s]


@pytest.mark.parametrize("n, k", [(16, 4), (100, 1), (1000, 37), (64, 64)])
def test_s_of_k(n, k):
    s = s_of_k(n, k)
    assert ell(k, n) < s <= ell(k, n) + 1
    assert s_of_k(16, 4) == 3


def test_u_sup_envelope_examples():
    spec = EmbeddingSpec.of(1, 2, INF, 1, 1000)
    assert u_sup_envelope(spec, math.e**2 - 1) == pytest.approx(2 / (math.e**2 - 1))
    assert u_sup_envelope(spec, 7) == pytest.approx(7**-1 * math.log(8))
    spec = EmbeddingSpec.of(2, INF, 2, 2, 90)
    assert u_sup_envelope(spec, 10) == pytest.approx(math.sqrt(math.log(10)))
    with pytest.raises(NotAvailable):
        u_sup_envelope(EmbeddingSpec.of(1, 1, 2, 2, 90), 3)
    with pytest.raises(ValueError):
        u_sup_envelope(spec, 85)


def test_sterm_bound():
    assert sterm_bound(EmbeddingSpec.of(1, 1, INF, INF, 20), 8) == pytest.approx(1 / 8)
    assert sterm_bound(EmbeddingSpec.of(2, INF, 2, 2, 20), 20) == pytest.approx(1.0)
    assert sterm_bound(EmbeddingSpec.of(1, 1, 2, 2, 20), 3) is None


def test_numeric_suprema_are_attained_lower_bounds():
    spec = EmbeddingSpec.of(2, INF, 2, 1, 48)
    opts = AscentOptions(tol=1e-6)
    r = u_sup_numeric(spec, 4, opts)
    w = r.witness
    assert lorentz_norm(w, spec.source) == pytest.approx(1.0)
    assert trunc_u(w, 4, spec.target) == pytest.approx(r.value, rel=1e-12)
    sg = sigma_sup_numeric(spec, 4, opts)
    assert sg.value <= r.value * (1 + 1e-9)
    # same order as the envelope for this cell
    assert 0.25 < r.value / u_sup_envelope(spec, 4) < 4


def test_sup_dispatch():
    spec = EmbeddingSpec.of(INF, 1, INF, 2, 64)
    assert u_sup(spec, 4) == pytest.approx(math.log(5) ** -0.5)
    assert sigma_sup(spec, 64) == 0.0
    assert sigma_sup_numeric(spec, 64).value == 0.0
    with pytest.raises(ValueError):
        u_sup(spec, 4, method="magic")
