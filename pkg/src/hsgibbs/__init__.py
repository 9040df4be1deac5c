"""Auxiliary-variable Gibbs samplers for horseshoe regression."""
__version__ = "0.1.0"

from .diagnostics import (
    EssReport,
    MarginalLikelihoodEstimate,
    chib_marginal_likelihood,
    effective_sample_size,
    ess_vs_thinning,
)
from .dists import (
    InvGammaParams,
    PolyaGammaParams,
    inv_gamma_log_pdf,
    sample_inv_gamma,
    sample_polya_gamma,
)
from .errors import ConfigurationError, DataError, NumericalError, ParameterDomainError
from .gauss import BackendPolicy, GaussCondSpec, sample_beta_fast, sample_beta_rue, select_backend
from .glm import GlmData, GlmState, run_chain_glm
from .linear import ChainOutput, HsState, RegressionData, SamplerConfig, run_chain, run_chains
from .rng import make_stream, split_streams

__all__ = [
    "BackendPolicy",
    "ChainOutput",
    "ConfigurationError",
    "DataError",
    "EssReport",
    "GaussCondSpec",
    "GlmData",
    "GlmState",
    "HsState",
    "InvGammaParams",
    "MarginalLikelihoodEstimate",
    "NumericalError",
    "ParameterDomainError",
    "PolyaGammaParams",
    "RegressionData",
    "SamplerConfig",
    "chib_marginal_likelihood",
    "effective_sample_size",
    "ess_vs_thinning",
    "inv_gamma_log_pdf",
    "make_stream",
    "run_chain",
    "run_chain_glm",
    "run_chains",
    "sample_beta_fast",
    "sample_beta_rue",
    "sample_inv_gamma",
    "sample_polya_gamma",
    "select_backend",
    "split_streams",
]
