"""Scalar distributions used by the Gibbs updates.

Inverse-gamma uses the shape/scale convention

    p(z | a, b) = b**a / Gamma(a) * z**(-a - 1) * exp(-b / z),

so that ``IG(a, b)`` has mean ``b / (a - 1)`` for ``a > 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import kernels
from .errors import ParameterDomainError

PG_SERIES_TERMS = 200


def _check_positive(name, value):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ParameterDomainError(f"{name} must be finite and > 0, got {value!r}")
    return arr


@dataclass(frozen=True)
class InvGammaParams:
    shape: float
    scale: float

    def __post_init__(self):
        _check_positive("shape", self.shape)
        _check_positive("scale", self.scale)

    @property
    def mean(self) -> float:
        return self.scale / (self.shape - 1.0) if self.shape > 1 else math.inf

    @property
    def var(self) -> float:
        a, b = self.shape, self.scale
        return b * b / ((a - 1.0) ** 2 * (a - 2.0)) if a > 2 else math.inf


@dataclass(frozen=True)
class PolyaGammaParams:
    shape: float
    tilt: float = 0.0

    def __post_init__(self):
        _check_positive("shape", self.shape)
        if not math.isfinite(self.tilt):
            raise ParameterDomainError(f"tilt must be finite, got {self.tilt!r}")

    @property
    def mean(self) -> float:
        return polya_gamma_mean(self.shape, self.tilt)


def inv_gamma(rng, shape, scale, size=None):
    """Vectorised IG(shape, scale) draws as ``scale / Gamma(shape, 1)``.

    No validation; callers own the parameter domain.
    """
    scale = np.asarray(scale, dtype=float)
    if size is None:
        size = np.broadcast_shapes(np.shape(shape), scale.shape) or None
    return scale / rng.standard_gamma(shape, size=size)


def sample_inv_gamma(params: InvGammaParams, rng, size=None):
    """Draw from IG(params.shape, params.scale)."""
    return inv_gamma(rng, params.shape, params.scale, size)


def inv_gamma_log_pdf(z, params: InvGammaParams | None = None, *, shape=None, scale=None):
    """Log density of the inverse gamma at ``z`` (array-friendly)."""
    if params is not None:
        shape, scale = params.shape, params.scale
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise ParameterDomainError("inverse-gamma density requires z > 0")
    shape = np.asarray(shape, dtype=float)
    scale = np.asarray(scale, dtype=float)
    out = shape * np.log(scale) - gammaln(shape) - (shape + 1.0) * np.log(z) - scale / z
    return out if out.ndim else float(out)


def sample_half_cauchy_mixture(rng, scale=1.0, size=None):
    """Half-Cauchy C+(0, scale) via the two-stage inverse-gamma mixture.

    ``a ~ IG(1/2, 1/scale**2)`` then ``x**2 | a ~ IG(1/2, 1/a)``.
    """
    a = inv_gamma(rng, 0.5, 1.0 / scale**2, size)
    return np.sqrt(inv_gamma(rng, 0.5, 1.0 / a))


def polya_gamma_mean(b, c):
    """E[PG(b, c)] = b / (2c) * tanh(c / 2), with the limit b / 4 at c = 0."""
    b = np.asarray(b, dtype=float)
    c = np.abs(np.asarray(c, dtype=float))
    with np.errstate(invalid="ignore", divide="ignore"):
        m = np.where(c > 1e-8, b / (2.0 * c) * np.tanh(c / 2.0), b / 4.0)
    return m if m.ndim else float(m)


def sample_polya_gamma(params: PolyaGammaParams, rng, size=None):
    """Draw from PG(b, c).

    Integer ``b`` is an exact sum of ``b`` PG(1, c) draws; other shapes use
    the truncated gamma-series representation.
    """
    n = 1 if size is None else int(np.prod(size))
    out = polya_gamma(rng, np.full(n, params.shape), np.full(n, params.tilt))
    return out[0] if size is None else out.reshape(size)


def polya_gamma(rng, b, c):
    """Elementwise PG(b_i, c_i) draws for broadcastable ``b`` and ``c``."""
    b, c = np.broadcast_arrays(np.asarray(b, dtype=float), np.asarray(c, dtype=float))
    if np.any(~(b > 0)) or not np.all(np.isfinite(b)):
        raise ParameterDomainError("Polya-gamma shape must be finite and > 0")
    if not np.all(np.isfinite(c)):
        raise ParameterDomainError("Polya-gamma tilt must be finite")
    shape = b.shape
    out = kernels.polya_gamma(rng, np.ascontiguousarray(b.ravel()), np.ascontiguousarray(c.ravel()), PG_SERIES_TERMS)
    return out.reshape(shape)
