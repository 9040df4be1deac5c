"""Gibbs sampler for horseshoe and horseshoe+ linear regression.

Every full conditional is inverse gamma except the coefficient block, which
is Gaussian. The half-Cauchy priors on the local and global scales are
written as inverse-gamma mixtures with auxiliaries ``nu`` (one per
coefficient) and ``xi``, which is what makes every update conjugate.

Conditional parameter functions (``*_params``) are shared with the Chib
marginal-likelihood code so the sampler and the ordinates cannot drift apart.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import gauss
from .dists import inv_gamma
from .errors import ConfigurationError, DataError
from .rng import make_stream, split_streams

CLAMP_LO = 1e-12
CLAMP_HI = 1e12
SIGMA2_SCALE_FLOOR = 1e-12

PRIOR_VARIANTS = ("horseshoe", "horseshoe_plus")
SIGMA_PRIORS = ("jeffreys", "half_cauchy")
HS_PLUS_FORMS = ("conventional", "paper")


def clamp(x):
    return np.clip(x, CLAMP_LO, CLAMP_HI)


def _clamp_scalar(x):
    return float(min(max(x, CLAMP_LO), CLAMP_HI))


@dataclass
class RegressionData:
    X: np.ndarray
    y: np.ndarray
    standardized: bool = False
    column_means: np.ndarray | None = None
    column_norms: np.ndarray | None = None
    y_center: float = 0.0
    names: list[str] | None = None

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=float)
        self.y = np.ascontiguousarray(self.y, dtype=float)
        if self.X.ndim != 2 or self.y.ndim != 1 or self.X.shape[0] != self.y.shape[0]:
            raise DataError(f"dimension mismatch: X {self.X.shape}, y {self.y.shape}")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise DataError("X and y must be finite")
        p = self.X.shape[1]
        if self.column_means is None:
            self.column_means = np.zeros(p)
        if self.column_norms is None:
            self.column_norms = np.ones(p)
        if self.names is None:
            self.names = [f"x{j + 1}" for j in range(p)]
        self.gram = self.X.T @ self.X
        self.xty = self.X.T @ self.y

    @classmethod
    def from_arrays(cls, X, y, *, standardize=True, names=None):
        """Build the data record, centring ``y`` and scaling columns of ``X``
        to zero mean and unit Euclidean length when ``standardize`` is set."""
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if not standardize:
            return cls(X, y, names=names)
        means = X.mean(axis=0)
        Xc = X - means
        norms = np.linalg.norm(Xc, axis=0)
        if np.any(norms <= 0):
            bad = np.flatnonzero(norms <= 0).tolist()
            raise DataError(f"constant predictor column(s) {bad} cannot be standardised")
        yc = float(y.mean())
        return cls(Xc / norms, y - yc, True, means, norms, yc, names)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def destandardize(self, beta_draws):
        """Map coefficient draws back to the original predictor scale.

        Returns ``(beta, intercept)``; the intercept is ``y_center - means @ beta``.
        """
        beta = np.asarray(beta_draws, dtype=float) / self.column_norms
        intercept = self.y_center - beta @ self.column_means
        return beta, intercept


@dataclass
class HsState:
    beta: np.ndarray
    sigma2: float
    lambda2: np.ndarray
    tau2: float
    nu: np.ndarray
    xi: float
    eta2: np.ndarray | None = None
    phi: np.ndarray | None = None
    omega_sigma: float | None = None
    n_free: int = 0  # leading coefficients exempt from shrinkage (GLM intercept)

    @classmethod
    def initial(cls, p, prior_variant="horseshoe", sigma_prior="jeffreys", n_free=0):
        q = p - n_free
        plus = prior_variant == "horseshoe_plus"
        return cls(
            beta=np.zeros(p),
            sigma2=1.0,
            lambda2=np.ones(q),
            tau2=1.0,
            nu=np.ones(q),
            xi=1.0,
            eta2=np.ones(q) if plus else None,
            phi=np.ones(q) if plus else None,
            omega_sigma=1.0 if sigma_prior == "half_cauchy" else None,
            n_free=n_free,
        )

    @property
    def beta_pen(self) -> np.ndarray:
        return self.beta[self.n_free :]

    def copy(self) -> "HsState":
        def c(v):
            return v.copy() if isinstance(v, np.ndarray) else v

        return type(self)(**{k: c(v) for k, v in vars(self).items()})

    def prior_precision(self) -> np.ndarray:
        """Diagonal of the inverse prior covariance of beta (up to sigma2)."""
        d = np.empty(self.beta.shape[0])
        d[: self.n_free] = CLAMP_LO
        d[self.n_free :] = 1.0 / (clamp(self.lambda2) * _clamp_scalar(self.tau2))
        return d


@dataclass
class SamplerConfig:
    n_burn: int = 1000
    n_keep: int = 1000
    thin: int = 1
    prior_variant: str = "horseshoe"
    sigma_prior: str = "jeffreys"
    backend_policy: str = "auto"
    seed: int = 0
    hs_plus_form: str = "conventional"

    def __post_init__(self):
        if self.n_keep < 1 or self.thin < 1 or self.n_burn < 0:
            raise ConfigurationError("need n_keep >= 1, thin >= 1, n_burn >= 0")
        if self.prior_variant not in PRIOR_VARIANTS:
            raise ConfigurationError(f"prior_variant must be one of {PRIOR_VARIANTS}")
        self.sigma_prior = self.sigma_prior.replace("-", "_")
        if self.sigma_prior not in SIGMA_PRIORS:
            raise ConfigurationError(f"sigma_prior must be one of {SIGMA_PRIORS}")
        if self.hs_plus_form not in HS_PLUS_FORMS:
            raise ConfigurationError(f"hs_plus_form must be one of {HS_PLUS_FORMS}")
        gauss.BackendPolicy(self.backend_policy)


@dataclass
class ChainOutput:
    beta_draws: np.ndarray
    sigma2_draws: np.ndarray
    tau2_draws: np.ndarray
    lambda2_draws: np.ndarray | None
    wall_clock_seconds: float
    nu_draws: np.ndarray | None = None
    xi_draws: np.ndarray | None = None
    eta2_draws: np.ndarray | None = None
    phi_draws: np.ndarray | None = None
    omega_sigma_draws: np.ndarray | None = None
    names: list[str] | None = None
    extras: dict = field(default_factory=dict)

    @property
    def n_keep(self) -> int:
        return self.beta_draws.shape[0]


# -- conditional parameters --------------------------------------------------


def beta_spec(state: HsState, data: RegressionData) -> gauss.GaussCondSpec:
    return gauss.GaussCondSpec(
        data.X, data.xty, state.prior_precision(), state.sigma2, gram=data.gram
    )


def sigma2_params(state: HsState, data: RegressionData, sigma_prior="jeffreys"):
    r = data.y - data.X @ state.beta
    b = state.beta_pen
    pen = np.sum(b * b / (clamp(state.lambda2) * _clamp_scalar(state.tau2)))
    shape = 0.5 * (data.n + data.p)
    scale = 0.5 * float(r @ r) + 0.5 * float(pen)
    if sigma_prior == "half_cauchy":
        shape += 0.5
        scale += 1.0 / state.omega_sigma
    return shape, max(scale, SIGMA2_SCALE_FLOOR)


def omega_sigma_params(state: HsState):
    return 1.0, 1.0 + 1.0 / state.sigma2


def lambda2_params(state: HsState):
    b = state.beta_pen
    return 1.0, 1.0 / state.nu + b * b / (2.0 * state.tau2 * state.sigma2)


def tau2_params(state: HsState):
    b = state.beta_pen
    q = b.shape[0]
    return 0.5 * (q + 1), 1.0 / state.xi + float(np.sum(b * b / state.lambda2)) / (2.0 * state.sigma2)


def nu_params(state: HsState, hs_plus_form="conventional"):
    inv_l2 = 1.0 / state.lambda2
    if state.eta2 is None:
        return 1.0, 1.0 + inv_l2
    if hs_plus_form == "paper":
        return 1.0, state.eta2 + inv_l2
    return 1.0, 1.0 / state.eta2 + inv_l2


def xi_params(state: HsState):
    return 1.0, 1.0 + 1.0 / state.tau2


def eta2_params(state: HsState, hs_plus_form="conventional"):
    """IG parameters of the eta-layer variable that carries the auxiliary phi.

    Conventional form: eta2 itself, IG(1, 1/nu + 1/phi). Literal form: phi is
    attached to 1/eta2 (a standard half-Cauchy is invariant under inversion),
    which makes 1/eta2 ~ IG(1, 1/nu + 1/phi) conjugate as well.
    """
    return 1.0, 1.0 / state.nu + 1.0 / state.phi


def phi_params(state: HsState, hs_plus_form="conventional"):
    if hs_plus_form == "paper":
        return 1.0, 1.0 + state.eta2
    return 1.0, 1.0 + 1.0 / state.eta2


# -- block updates -------------------------------------------------------------


def update_beta(state: HsState, data: RegressionData, rng, policy="auto") -> np.ndarray:
    return gauss.sample_beta(beta_spec(state, data), rng, policy)


def update_sigma2(state: HsState, data: RegressionData, rng, sigma_prior="jeffreys") -> float:
    a, b = sigma2_params(state, data, sigma_prior)
    return _clamp_scalar(inv_gamma(rng, a, b))


def update_omega_sigma(state: HsState, rng) -> float:
    a, b = omega_sigma_params(state)
    return _clamp_scalar(inv_gamma(rng, a, b))


def update_lambda2(state: HsState, rng) -> np.ndarray:
    a, b = lambda2_params(state)
    return clamp(inv_gamma(rng, a, b))


def update_tau2(state: HsState, rng) -> float:
    a, b = tau2_params(state)
    return _clamp_scalar(inv_gamma(rng, a, b))


def update_nu(state: HsState, rng, hs_plus_form="conventional") -> np.ndarray:
    a, b = nu_params(state, hs_plus_form)
    return clamp(inv_gamma(rng, a, b))


def update_xi(state: HsState, rng) -> float:
    a, b = xi_params(state)
    return _clamp_scalar(inv_gamma(rng, a, b))


def update_aux(state: HsState, rng, hs_plus_form="conventional"):
    """Refresh the half-Cauchy auxiliaries; returns ``(nu, xi)``."""
    nu = update_nu(state, rng, hs_plus_form)
    xi = update_xi(state, rng)
    return nu, xi


def sample_eta2(state: HsState, rng, hs_plus_form="conventional") -> np.ndarray:
    if state.eta2 is None:
        raise ConfigurationError("eta2 update requires the horseshoe_plus prior")
    a, b = eta2_params(state, hs_plus_form)
    draw = inv_gamma(rng, a, b)
    return clamp(1.0 / draw if hs_plus_form == "paper" else draw)


def sample_phi(state: HsState, rng, hs_plus_form="conventional") -> np.ndarray:
    if state.eta2 is None:
        raise ConfigurationError("phi update requires the horseshoe_plus prior")
    a, b = phi_params(state, hs_plus_form)
    return clamp(inv_gamma(rng, a, b))


def update_eta2(state: HsState, rng, hs_plus_form="conventional"):
    """Horseshoe+ mixing layer: draw eta2 then its auxiliary phi.

    Returns ``(eta2, phi)``; ``state`` is not modified.
    """
    eta2 = sample_eta2(state, rng, hs_plus_form)
    phi = sample_phi(replace(state, eta2=eta2), rng, hs_plus_form)
    return eta2, phi


# -- chains --------------------------------------------------------------------

SWEEP_BLOCKS = ("beta", "sigma2", "omega_sigma", "lambda2", "tau2", "nu", "xi", "eta2", "phi")


def gibbs_sweep(state: HsState, data: RegressionData, rng, config: SamplerConfig, fixed=frozenset()):
    """One in-place sweep in the order beta, sigma2, lambda2, tau2, (nu, xi), (eta2, phi).

    Blocks named in ``fixed`` are skipped (reduced runs for Chib's method).
    """
    if "beta" not in fixed:
        state.beta = update_beta(state, data, rng, config.backend_policy)
    if "sigma2" not in fixed:
        state.sigma2 = update_sigma2(state, data, rng, config.sigma_prior)
    if state.omega_sigma is not None and "omega_sigma" not in fixed:
        state.omega_sigma = update_omega_sigma(state, rng)
    _hyper_sweep(state, rng, config, fixed)


def _hyper_sweep(state, rng, config, fixed=frozenset()):
    if "lambda2" not in fixed:
        state.lambda2 = update_lambda2(state, rng)
    if "tau2" not in fixed:
        state.tau2 = update_tau2(state, rng)
    if "nu" not in fixed:
        state.nu = update_nu(state, rng, config.hs_plus_form)
    if "xi" not in fixed:
        state.xi = update_xi(state, rng)
    if state.eta2 is not None:
        if "eta2" not in fixed:
            state.eta2 = sample_eta2(state, rng, config.hs_plus_form)
        if "phi" not in fixed:
            state.phi = sample_phi(state, rng, config.hs_plus_form)


class _Recorder:
    def __init__(self, state, n_keep):
        p = state.beta.shape[0]
        q = state.lambda2.shape[0]
        self.beta = np.empty((n_keep, p))
        self.sigma2 = np.empty(n_keep)
        self.tau2 = np.empty(n_keep)
        self.lambda2 = np.empty((n_keep, q))
        self.nu = np.empty((n_keep, q))
        self.xi = np.empty(n_keep)
        self.eta2 = np.empty((n_keep, q)) if state.eta2 is not None else None
        self.phi = np.empty((n_keep, q)) if state.eta2 is not None else None
        self.omega_sigma = np.empty(n_keep) if state.omega_sigma is not None else None

    def store(self, i, s):
        self.beta[i] = s.beta
        self.sigma2[i] = s.sigma2
        self.tau2[i] = s.tau2
        self.lambda2[i] = s.lambda2
        self.nu[i] = s.nu
        self.xi[i] = s.xi
        if self.eta2 is not None:
            self.eta2[i] = s.eta2
            self.phi[i] = s.phi
        if self.omega_sigma is not None:
            self.omega_sigma[i] = s.omega_sigma

    def output(self, seconds, names):
        return ChainOutput(
            beta_draws=self.beta,
            sigma2_draws=self.sigma2,
            tau2_draws=self.tau2,
            lambda2_draws=self.lambda2,
            wall_clock_seconds=seconds,
            nu_draws=self.nu,
            xi_draws=self.xi,
            eta2_draws=self.eta2,
            phi_draws=self.phi,
            omega_sigma_draws=self.omega_sigma,
            names=list(names) if names is not None else None,
        )


def run_sweeps(sweep, state, config, rng):
    """Burn-in, then ``n_keep * thin`` sweeps keeping every ``thin``-th state."""
    rec = _Recorder(state, config.n_keep)
    for _ in range(config.n_burn):
        sweep(state, rng)
    for i in range(config.n_keep):
        for _ in range(config.thin):
            sweep(state, rng)
        rec.store(i, state)
    return rec


def run_chain(data: RegressionData, config: SamplerConfig, *, rng=None, init: HsState | None = None) -> ChainOutput:
    """Run one horseshoe (or horseshoe+) linear-regression chain."""
    if rng is None:
        rng = make_stream(config.seed)
    state = init.copy() if init is not None else HsState.initial(data.p, config.prior_variant, config.sigma_prior)
    if state.beta.shape[0] != data.p:
        raise DataError(f"initial state has {state.beta.shape[0]} coefficients, data has {data.p}")

    def sweep(s, r):
        gibbs_sweep(s, data, r, config)

    t0 = time.perf_counter()
    rec = run_sweeps(sweep, state, config, rng)
    out = rec.output(time.perf_counter() - t0, data.names)
    out.extras["final_state"] = state
    return out


def run_chains(data: RegressionData, config: SamplerConfig, n_chains: int, max_workers=None) -> list[ChainOutput]:
    """Independent chains on streams split from ``config.seed``."""
    streams = split_streams(config.seed, n_chains)
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = [pool.submit(run_chain, data, config, rng=r) for r in streams]
        return [f.result() for f in futures]
