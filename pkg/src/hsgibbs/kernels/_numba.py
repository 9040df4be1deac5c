"""numba-compiled kernels (default backend)."""
import math

import numpy as np
from numba import njit

from ._common import PI, SQRT2, TRUNC, series_tail_moments

_tail_moments = njit(cache=True)(series_tail_moments)


@njit(cache=True)
def _log_norm_cdf(x):
    v = 0.5 * math.erfc(-x / SQRT2)
    if v <= 0.0:
        return -np.inf
    return math.log(v)


@njit(cache=True)
def _prob_exponential(z):
    # mixture weight of the truncated-exponential proposal piece
    fz = 0.125 * PI * PI + 0.5 * z * z
    rt = math.sqrt(1.0 / TRUNC)
    b = rt * (TRUNC * z - 1.0)
    a = -rt * (TRUNC * z + 1.0)
    x0 = math.log(fz) + fz * TRUNC
    xb = x0 - z + _log_norm_cdf(b)
    xa = x0 + z + _log_norm_cdf(a)
    hi = max(xb, xa)
    lq = math.log(4.0 / PI) + hi + math.log(math.exp(xb - hi) + math.exp(xa - hi))
    if lq > 0.0:
        e = math.exp(-lq)
        return e / (1.0 + e)
    return 1.0 / (1.0 + math.exp(lq))


@njit(cache=True)
def _series_coef(n, x):
    k = n + 0.5
    if x > TRUNC:
        return PI * k * math.exp(-0.5 * k * k * PI * PI * x)
    return PI * k * (2.0 / (PI * x)) ** 1.5 * math.exp(-2.0 * k * k / x)


@njit(cache=True)
def _truncated_inv_gauss(rng, z):
    # inverse-Gaussian(1/z, 1) restricted to (0, TRUNC]
    x = TRUNC + 1.0
    if z < 1.0 / TRUNC:
        alpha = 0.0
        while rng.random() > alpha:
            e1 = rng.standard_exponential()
            e2 = rng.standard_exponential()
            while e1 * e1 > 2.0 * e2 / TRUNC:
                e1 = rng.standard_exponential()
                e2 = rng.standard_exponential()
            x = 1.0 + e1 * TRUNC
            x = TRUNC / (x * x)
            alpha = math.exp(-0.5 * z * z * x)
    else:
        mu = 1.0 / z
        while x > TRUNC:
            y = rng.standard_normal()
            y *= y
            half_mu = 0.5 * mu
            mu_y = mu * y
            x = mu + half_mu * mu_y - half_mu * math.sqrt(4.0 * mu_y + mu_y * mu_y)
            if rng.random() > mu / (mu + x):
                x = mu * mu / x
    return x


@njit(cache=True)
def pg1(rng, c):
    """One exact PG(1, c) draw (alternating-series rejection)."""
    z = 0.5 * abs(c)
    fz = 0.125 * PI * PI + 0.5 * z * z
    p_exp = _prob_exponential(z)
    while True:
        if rng.random() < p_exp:
            x = TRUNC + rng.standard_exponential() / fz
        else:
            x = _truncated_inv_gauss(rng, z)
        s = _series_coef(0, x)
        y = rng.random() * s
        n = 0
        while True:
            n += 1
            if n % 2 == 1:
                s -= _series_coef(n, x)
                if y <= s:
                    return 0.25 * x
            else:
                s += _series_coef(n, x)
                if y > s:
                    break


@njit(cache=True)
def pg_series(rng, b, c, n_terms):
    """Truncated sum-of-gammas PG(b, c) with a moment-matched gamma tail."""
    a = abs(c) / (2.0 * PI)
    acc = 0.0
    for k in range(1, n_terms + 1):
        d = (k - 0.5) ** 2 + a * a
        acc += rng.standard_gamma(b) / d
    t1, t2 = _tail_moments(a, n_terms)
    mean = b * t1
    var = b * t2
    if mean > 0.0 and var > 0.0:
        shape = mean * mean / var
        acc += rng.standard_gamma(shape) * (var / mean)
    return acc / (2.0 * PI * PI)


@njit(cache=True)
def polya_gamma(rng, b, c, n_terms):
    out = np.empty(c.shape[0])
    for i in range(c.shape[0]):
        bi = b[i]
        if bi == math.floor(bi):
            acc = 0.0
            for _ in range(int(bi)):
                acc += pg1(rng, c[i])
            out[i] = acc
        else:
            out[i] = pg_series(rng, bi, c[i], n_terms)
    return out


@njit(cache=True)
def _autocov(xc, lag):
    n = xc.shape[0]
    return np.dot(xc[: n - lag], xc[lag:]) / n


@njit(cache=True)
def _autocov_pair(xc, lag):
    """Autocovariances at ``lag`` and ``lag + 1`` summed (BLAS dot on views)."""
    n = xc.shape[0]
    return (np.dot(xc[: n - lag], xc[lag:]) + np.dot(xc[: n - lag - 1], xc[lag + 1 :])) / n


@njit(cache=True)
def geyer_tau(x):
    """Integrated autocorrelation time by the initial monotone sequence.

    Returns ``(tau, last_lag)``.
    """
    n = x.shape[0]
    xc = x - x.mean()
    g0 = _autocov(xc, 0)
    total = 0.0
    prev = np.inf
    lag = 0
    while lag + 1 < n:
        pair = _autocov_pair(xc, lag)
        if pair <= 0.0:
            break
        if pair > prev:
            pair = prev
        total += pair
        prev = pair
        lag += 2
    return -1.0 + 2.0 * total / g0, lag
