"""Effective sample size and Chib marginal-likelihood estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from . import kernels, linear
from .dists import inv_gamma_log_pdf
from .errors import ConfigurationError, DataError, NumericalError
from .gauss import gaussian_log_density
from .linear import HsState, RegressionData, SamplerConfig
from .rng import make_stream

MIN_ESS_LENGTH = 100


@dataclass
class EssReport:
    per_coefficient_ess: np.ndarray
    ess_proportion: np.ndarray
    thin_level: int
    n_draws: int = 0


def effective_sample_size(draws) -> float:
    """ESS = N / tau, tau from Geyer's initial monotone positive sequence."""
    x = np.ascontiguousarray(draws, dtype=float)
    if x.ndim != 1:
        raise DataError("effective_sample_size expects a 1-D sequence")
    if x.size < MIN_ESS_LENGTH:
        raise DataError(f"need at least {MIN_ESS_LENGTH} draws, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DataError("draws contain non-finite values")
    if np.ptp(x) == 0:
        raise DataError("constant sequence: effective sample size undefined")
    tau, _ = kernels.geyer_tau(x)
    return float(x.size / tau)


def _as_matrix(chain):
    if isinstance(chain, linear.ChainOutput):
        return chain.beta_draws
    m = np.asarray(chain, dtype=float)
    return m[:, None] if m.ndim == 1 else m


def ess_vs_thinning(chain, thin_levels) -> list[EssReport]:
    """Per-coefficient ESS proportion of the chain thinned at each level."""
    draws = _as_matrix(chain)
    reports = []
    for t in thin_levels:
        t = int(t)
        if t < 1:
            raise DataError(f"thin level must be >= 1, got {t}")
        sub = draws[::t]
        if sub.shape[0] < MIN_ESS_LENGTH:
            raise DataError(
                f"thin level {t} leaves {sub.shape[0]} draws; need {MIN_ESS_LENGTH}"
            )
        ess = np.array([effective_sample_size(sub[:, j]) for j in range(sub.shape[1])])
        reports.append(EssReport(ess, ess / sub.shape[0], t, sub.shape[0]))
    return reports


# -- Chib ----------------------------------------------------------------------


@dataclass
class MarginalLikelihoodEstimate:
    log_marginal: float
    ordinate_breakdown: dict  # posterior-ordinate entries are stored negated
    n_reduced_runs: int
    std_error: float = math.nan
    block_std_errors: dict = field(default_factory=dict)
    ordinate_point: HsState | None = None


def ordinate_blocks(config: SamplerConfig) -> list[str]:
    blocks = ["beta", "sigma2"]
    if config.sigma_prior == "half_cauchy":
        blocks.append("omega_sigma")
    blocks += ["lambda2", "tau2", "nu", "xi"]
    if config.prior_variant == "horseshoe_plus":
        blocks += ["eta2", "phi"]
    return blocks


def _ig(z, params):
    a, b = params
    return float(np.sum(inv_gamma_log_pdf(z, shape=a, scale=b)))


def log_likelihood(state: HsState, data: RegressionData) -> float:
    r = data.y - data.X @ state.beta
    n = data.n
    return float(-0.5 * n * math.log(2 * math.pi * state.sigma2) - 0.5 * (r @ r) / state.sigma2)


def log_prior(state: HsState, config: SamplerConfig) -> float:
    """Joint log prior of all blocks, auxiliaries included.

    The Jeffreys noise prior contributes the improper density 1/sigma2.
    """
    b = state.beta
    v = state.sigma2 * state.lambda2 * state.tau2
    lp = float(np.sum(-0.5 * np.log(2 * math.pi * v) - 0.5 * b * b / v))
    if config.sigma_prior == "half_cauchy":
        lp += _ig(state.sigma2, (0.5, 1.0 / state.omega_sigma)) + _ig(state.omega_sigma, (0.5, 1.0))
    else:
        lp += -math.log(state.sigma2)
    lp += _ig(state.lambda2, (0.5, 1.0 / state.nu))
    if config.prior_variant == "horseshoe_plus":
        if config.hs_plus_form == "paper":
            lp += _ig(state.nu, (0.5, state.eta2))
            lp += _ig(1.0 / state.eta2, (0.5, 1.0 / state.phi)) - 2.0 * float(np.sum(np.log(state.eta2)))
        else:
            lp += _ig(state.nu, (0.5, 1.0 / state.eta2))
            lp += _ig(state.eta2, (0.5, 1.0 / state.phi))
        lp += _ig(state.phi, (0.5, 1.0))
    else:
        lp += _ig(state.nu, (0.5, 1.0))
    lp += _ig(state.tau2, (0.5, 1.0 / state.xi)) + _ig(state.xi, (0.5, 1.0))
    return lp


def conditional_log_density(block: str, point: HsState, state: HsState, data: RegressionData, config: SamplerConfig) -> float:
    """log p(block = point.block | all other blocks as in ``state``)."""
    if block == "beta":
        return gaussian_log_density(point.beta, linear.beta_spec(state, data))
    if block == "sigma2":
        return _ig(point.sigma2, linear.sigma2_params(state, data, config.sigma_prior))
    if block == "omega_sigma":
        return _ig(point.omega_sigma, linear.omega_sigma_params(state))
    if block == "lambda2":
        return _ig(point.lambda2, linear.lambda2_params(state))
    if block == "tau2":
        return _ig(point.tau2, linear.tau2_params(state))
    if block == "nu":
        return _ig(point.nu, linear.nu_params(state, config.hs_plus_form))
    if block == "xi":
        return _ig(point.xi, linear.xi_params(state))
    if block == "eta2":
        params = linear.eta2_params(state, config.hs_plus_form)
        if config.hs_plus_form == "paper":
            # density of eta2 when 1/eta2 is inverse gamma
            return _ig(1.0 / point.eta2, params) - 2.0 * float(np.sum(np.log(point.eta2)))
        return _ig(point.eta2, params)
    if block == "phi":
        return _ig(point.phi, linear.phi_params(state, config.hs_plus_form))
    raise ConfigurationError(f"unknown block {block!r}")


def _log_mean_exp(vals, n_batches=50):
    """log of the mean of exp(vals) and its batch-means standard error."""
    vals = np.asarray(vals, dtype=float)
    lme = float(logsumexp(vals) - math.log(vals.size))
    w = np.exp(vals - vals.max())
    nb = min(n_batches, vals.size)
    batches = np.array([b.mean() for b in np.array_split(w, nb)])
    se_mean = batches.std(ddof=1) / math.sqrt(nb) if nb > 1 else math.inf
    return lme, float(se_mean / w.mean())


def default_ordinate_point(pilot: linear.ChainOutput) -> HsState:
    """Posterior mean for beta, posterior medians for the variance blocks."""

    def med(a):
        return None if a is None else np.median(a, axis=0)

    return HsState(
        beta=pilot.beta_draws.mean(axis=0),
        sigma2=float(med(pilot.sigma2_draws)),
        lambda2=med(pilot.lambda2_draws),
        tau2=float(med(pilot.tau2_draws)),
        nu=med(pilot.nu_draws),
        xi=float(med(pilot.xi_draws)),
        eta2=med(pilot.eta2_draws),
        phi=med(pilot.phi_draws),
        omega_sigma=None if pilot.omega_sigma_draws is None else float(med(pilot.omega_sigma_draws)),
    )


def chib_marginal_likelihood(
    data: RegressionData,
    config: SamplerConfig,
    ordinate_point: HsState | None = None,
    *,
    rng=None,
) -> MarginalLikelihoodEstimate:
    """Chib's estimate of log m(y) from the Gibbs output.

    log m(y) = log p(y | theta*) + log p(theta*) - sum_k log p(theta*_k | y, theta*_{<k}),
    each ordinate averaged over a run with the earlier blocks frozen at theta*.
    Every run has ``config.n_burn`` burn-in sweeps and ``config.n_keep`` sweeps.
    """
    if rng is None:
        rng = make_stream(config.seed)
    blocks = ordinate_blocks(config)
    n_runs = 0
    if ordinate_point is None:
        pilot = linear.run_chain(data, config, rng=rng)
        n_runs += 1
        ordinate_point = default_ordinate_point(pilot)
    point = ordinate_point.copy()

    breakdown = {
        "likelihood": log_likelihood(point, data),
        "prior": log_prior(point, config),
    }
    ses = {}
    for k, block in enumerate(blocks):
        fixed = frozenset(blocks[:k])
        if k == len(blocks) - 1:
            # nothing left to integrate over: the conditional is exact
            val, se = conditional_log_density(block, point, point, data, config), 0.0
        else:
            state = point.copy()
            if k == 0:
                state = HsState.initial(data.p, config.prior_variant, config.sigma_prior)
            for _ in range(config.n_burn):
                linear.gibbs_sweep(state, data, rng, config, fixed)
            vals = np.empty(config.n_keep)
            for i in range(config.n_keep):
                linear.gibbs_sweep(state, data, rng, config, fixed)
                vals[i] = conditional_log_density(block, point, state, data, config)
            n_runs += 1
            val, se = _log_mean_exp(vals)
        if not math.isfinite(val):
            raise NumericalError(f"non-finite posterior ordinate for block {block!r}", block=block)
        breakdown[f"posterior.{block}"] = -val
        ses[block] = se
    for key in ("likelihood", "prior"):
        if not math.isfinite(breakdown[key]):
            raise NumericalError(f"non-finite {key} ordinate", block=key)

    total = 0.0
    for v in breakdown.values():
        total += v
    return MarginalLikelihoodEstimate(
        log_marginal=total,
        ordinate_breakdown=breakdown,
        n_reduced_runs=n_runs,
        std_error=math.sqrt(sum(s * s for s in ses.values())),
        block_std_errors=ses,
        ordinate_point=point,
    )
