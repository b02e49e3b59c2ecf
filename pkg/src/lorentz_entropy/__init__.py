"""Entropy numbers of embeddings between finite-dimensional Lorentz sequence spaces."""
from .cells import EmbeddingSpec, EnvelopeValue, NotAvailable, case_of, ell, regime_of
from .seqcore import (
    LorentzParams,
    fundamental_phi,
    harmonic,
    lorentz_norm,
    parse_extended,
    rearrange,
    tail_bound,
    tail_sum,
)
from .opnorm import NormResult, embedding_norm_envelope, embedding_norm_exact, embedding_norm_numeric
from .sparse import sigma_s, trunc_u, u_sup, sigma_sup, s_of_k
from .entropy import EntropyBracket, envelope_lorentz, envelope_lp, envelope_via_en
from .volume import lorentz_ball_volume_mc, lp_ball_volume_exact, rv, entropy_vol_lower
from .covnum import combinatorial_family, covering_upper, packing_lower
from .interp import InterpPair, k_functional, theta_u_norm

__version__ = "0.1.0"
