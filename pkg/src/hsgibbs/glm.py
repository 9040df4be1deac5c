"""Polya-gamma augmented horseshoe samplers for logistic and negative-binomial
regression.

Given omega_i ~ PG(b_i, x_i'beta) the likelihood is Gaussian in beta with
precision diag(omega) and pseudo-response kappa_i / omega_i, where

* logistic:  b_i = 1,        kappa_i = y_i - 1/2
* negbin:    b_i = y_i + h,  kappa_i = (y_i - h) / 2

The negative-binomial likelihood is (1 - pi_i)^h pi_i^{y_i} with
pi_i = logistic(x_i'beta), i.e. mean h * exp(x_i'beta) and variance
mean * (1 + mean / h). The first column of X is an unpenalised intercept.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import gauss
from .dists import polya_gamma
from .errors import ConfigurationError, DataError, ParameterDomainError
from .linear import ChainOutput, HsState, SamplerConfig, _hyper_sweep, _Recorder, run_sweeps
from .rng import make_stream

FAMILIES = ("logistic", "negbin")


@dataclass
class GlmData:
    X: np.ndarray
    y: np.ndarray
    family: str = "logistic"
    dispersion_h: float | None = None
    names: list[str] | None = None

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=float)
        self.y = np.ascontiguousarray(self.y, dtype=float)
        if self.family not in FAMILIES:
            raise ConfigurationError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.X.ndim != 2 or self.y.ndim != 1 or self.X.shape[0] != self.y.shape[0]:
            raise DataError(f"dimension mismatch: X {self.X.shape}, y {self.y.shape}")
        if not np.all(self.X[:, 0] == 1.0):
            raise DataError("first column of X must be the all-ones intercept")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise DataError("X and y must be finite")
        if self.family == "logistic":
            if not np.all((self.y == 0) | (self.y == 1)):
                raise DataError("logistic response must be 0/1")
        else:
            if self.dispersion_h is None or not (self.dispersion_h > 0 and np.isfinite(self.dispersion_h)):
                raise ParameterDomainError("negbin requires a finite dispersion h > 0")
            if np.any(self.y < 0) or np.any(self.y != np.floor(self.y)):
                raise DataError("negbin response must be non-negative integer counts")
        if self.names is None:
            self.names = ["intercept"] + [f"x{j}" for j in range(1, self.X.shape[1])]

    @classmethod
    def with_intercept(cls, X, y, family="logistic", dispersion_h=None, names=None):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        X1 = np.column_stack([np.ones(X.shape[0]), X])
        if names is not None:
            names = ["intercept"] + list(names)
        return cls(X1, y, family, dispersion_h, names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def pg_shape(self) -> np.ndarray:
        if self.family == "logistic":
            return np.ones(self.n)
        return self.y + self.dispersion_h

    @property
    def kappa(self) -> np.ndarray:
        if self.family == "logistic":
            return self.y - 0.5
        return 0.5 * (self.y - self.dispersion_h)


@dataclass
class GlmState(HsState):
    omega: np.ndarray | None = None

    @classmethod
    def initial(cls, p, n, prior_variant="horseshoe"):
        base = HsState.initial(p, prior_variant, "jeffreys", n_free=1)
        return cls(**vars(base), omega=np.ones(n))


def update_omega_logistic(state: HsState, data: GlmData, rng) -> np.ndarray:
    return polya_gamma(rng, 1.0, data.X @ state.beta)


def update_omega_negbin(state: HsState, data: GlmData, rng) -> np.ndarray:
    return polya_gamma(rng, data.y + data.dispersion_h, data.X @ state.beta)


def update_omega(state, data: GlmData, rng):
    if data.family == "logistic":
        return update_omega_logistic(state, data, rng)
    return update_omega_negbin(state, data, rng)


def beta_glm_spec(state: GlmState, data: GlmData) -> gauss.GaussCondSpec:
    """Gaussian conditional N(A^{-1} X'kappa, A^{-1}), A = X' Omega X + Lambda_*^{-1}.

    X' Omega z with z = kappa / omega reduces to X' kappa.
    """
    design = np.sqrt(state.omega)[:, None] * data.X
    return gauss.GaussCondSpec(design, data.X.T @ data.kappa, state.prior_precision(), 1.0)


def update_beta_glm(state: GlmState, data: GlmData, rng, policy="auto") -> np.ndarray:
    return gauss.sample_beta(beta_glm_spec(state, data), rng, policy)


def glm_sweep(state: GlmState, data: GlmData, rng, config: SamplerConfig):
    state.omega = update_omega(state, data, rng)
    state.beta = update_beta_glm(state, data, rng, config.backend_policy)
    _hyper_sweep(state, rng, config)


def run_chain_glm(data: GlmData, config: SamplerConfig, family: str | None = None, *, rng=None) -> ChainOutput:
    """Run a PG-augmented horseshoe chain; sigma2 is identically 1."""
    if family is not None and family != data.family:
        raise ConfigurationError(f"family {family!r} does not match data family {data.family!r}")
    if config.sigma_prior != "jeffreys":
        raise ConfigurationError("GLM families have no noise variance; sigma_prior must be jeffreys")
    if data.p < 2:
        raise DataError("GLM design needs the intercept plus at least one predictor")
    if rng is None:
        rng = make_stream(config.seed)
    state = GlmState.initial(data.p, data.n, config.prior_variant)

    def sweep(s, r):
        glm_sweep(s, data, r, config)

    t0 = time.perf_counter()
    rec = run_sweeps(sweep, state, config, rng)
    out = rec.output(time.perf_counter() - t0, data.names)
    out.extras["final_state"] = state
    out.extras["family"] = data.family
    return out
