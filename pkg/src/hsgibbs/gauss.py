"""Draws from the Gaussian full conditional of the regression coefficients.

Target law: N(A^{-1} b, s2 * A^{-1}) with A = X'X + diag(d), where ``b`` is the
weighted response X'y and ``d`` the prior precision diagonal.

Two exact backends:

* ``rue`` factors the p x p matrix A (cubic in p).
* ``fast`` works on the n x n system I + X D X' (D = diag(1/d)) and is linear
  in p; it is the data-augmentation scheme for p >> n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import linalg
from scipy.linalg import blas, lapack

from .errors import NumericalError, ParameterDomainError

JITTER_STEPS = (1e-12, 1e-10, 1e-8, 1e-6)


class BackendPolicy(str, Enum):
    AUTO = "auto"
    RUE = "rue"
    FAST = "fast"


@dataclass
class GaussCondSpec:
    design: np.ndarray
    weighted_response: np.ndarray
    prior_precision_diag: np.ndarray
    noise_variance: float = 1.0
    gram: np.ndarray | None = None  # optional cached design' design

    def __post_init__(self):
        self.design = np.asarray(self.design, dtype=float)
        self.weighted_response = np.asarray(self.weighted_response, dtype=float)
        self.prior_precision_diag = np.asarray(self.prior_precision_diag, dtype=float)
        n, p = self.design.shape
        if self.weighted_response.shape != (p,) or self.prior_precision_diag.shape != (p,):
            raise ParameterDomainError(
                f"dimension mismatch: design {self.design.shape}, response "
                f"{self.weighted_response.shape}, precision {self.prior_precision_diag.shape}"
            )
        d = self.prior_precision_diag
        if not np.all(np.isfinite(d)) or np.any(d <= 0):
            raise ParameterDomainError("prior precision entries must be finite and > 0")
        if not (math.isfinite(self.noise_variance) and self.noise_variance > 0):
            raise ParameterDomainError("noise_variance must be finite and > 0")

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def p(self) -> int:
        return self.design.shape[1]

    def precision(self) -> np.ndarray:
        G = self.gram if self.gram is not None else self.design.T @ self.design
        A = G.copy()
        A[np.diag_indices_from(A)] += self.prior_precision_diag
        return A


def select_backend(n: int, p: int, policy: BackendPolicy | str = BackendPolicy.AUTO) -> str:
    policy = BackendPolicy(policy)
    if policy is BackendPolicy.RUE:
        return "rue"
    if policy is BackendPolicy.FAST:
        return "fast"
    return "rue" if n > p else "fast"


def _potrf(A):
    L, info = lapack.dpotrf(A, lower=1, clean=1, overwrite_a=0)
    return L if info == 0 else None


def cholesky_with_jitter(A: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, retrying with escalating diagonal jitter."""
    L = _potrf(A)
    if L is not None:
        return L
    scale = float(np.mean(np.diag(A)))
    tried = []
    for eps in JITTER_STEPS:
        tried.append(eps)
        B = A.copy()
        B[np.diag_indices_from(B)] += eps * scale
        L = _potrf(B)
        if L is not None:
            return L
    raise NumericalError(
        f"Cholesky failed after jitter levels {tried}", jitter_levels=tried, block="beta"
    )


def _lower_solve(L, b, trans=0):
    x, info = lapack.dtrtrs(L, b, lower=1, trans=trans)
    if info != 0:
        raise NumericalError(f"triangular solve failed (info={info})", block="beta")
    return x


def posterior_factor(spec: GaussCondSpec):
    """Return ``(L, mean)`` with L L' = A and mean = A^{-1} b."""
    L = cholesky_with_jitter(spec.precision())
    mean = _lower_solve(L, _lower_solve(L, spec.weighted_response), trans=1)
    return L, mean


def sample_beta_rue(spec: GaussCondSpec, rng, size=None) -> np.ndarray:
    """Cholesky draw; ``size`` draws share one factorisation (rows of the result)."""
    # beta = L^{-T} (L^{-1} b + s z), i.e. mean plus s L^{-T} z
    L = cholesky_with_jitter(spec.precision())
    v = _lower_solve(L, spec.weighted_response)
    s = math.sqrt(spec.noise_variance)
    if size is None:
        z = rng.standard_normal(spec.p)
        return _lower_solve(L, v + s * z, trans=1)
    z = rng.standard_normal((size, spec.p)).T
    return _lower_solve(L, v[:, None] + s * z, trans=1).T


def sample_beta_fast(spec: GaussCondSpec, rng, size=None) -> np.ndarray:
    """Data-augmentation draw through the n x n system; same law as the Cholesky draw."""
    X = spec.design
    n, p = X.shape
    s = math.sqrt(spec.noise_variance)
    dvar = 1.0 / spec.prior_precision_diag  # prior variances up to s2
    XD = X * dvar
    # lower triangle of X D X' by a rank-p update; the factorisation reads only that half
    Xs = X * np.sqrt(dvar)
    M = blas.dsyrk(1.0, Xs.T, trans=1, lower=1)
    M[np.diag_indices_from(M)] += 1.0
    try:
        C = linalg.cho_factor(M, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"inner {n}x{n} factorisation failed: {exc}", block="beta") from exc

    # zero-mean part: u ~ N(0, D), delta ~ N(0, I), v = Xu + delta
    if size is None:
        u = np.sqrt(dvar) * rng.standard_normal(p)
        delta = rng.standard_normal(n)
    else:
        u = np.sqrt(dvar)[:, None] * rng.standard_normal((size, p)).T
        delta = rng.standard_normal((size, n)).T
    w = linalg.cho_solve(C, X @ u + delta, check_finite=False)
    centred = u - XD.T @ w

    # mean A^{-1} b by the Woodbury identity
    Db = dvar * spec.weighted_response
    mean = Db - XD.T @ linalg.cho_solve(C, X @ Db, check_finite=False)
    if size is None:
        return mean + s * centred
    return (mean[:, None] + s * centred).T


def sample_beta(spec: GaussCondSpec, rng, policy: BackendPolicy | str = BackendPolicy.AUTO, size=None) -> np.ndarray:
    if select_backend(spec.n, spec.p, policy) == "rue":
        return sample_beta_rue(spec, rng, size)
    return sample_beta_fast(spec, rng, size)


def gaussian_log_density(x: np.ndarray, spec: GaussCondSpec) -> float:
    """log N(x; A^{-1} b, s2 A^{-1}) through the sampler's own factorisation."""
    L, mean = posterior_factor(spec)
    r = L.T @ (np.asarray(x, dtype=float) - mean)
    p = spec.p
    logdet_prec = 2.0 * np.sum(np.log(np.diag(L)))
    return float(
        -0.5 * p * math.log(2.0 * math.pi * spec.noise_variance)
        + 0.5 * logdet_prec
        - 0.5 * (r @ r) / spec.noise_variance
    )
