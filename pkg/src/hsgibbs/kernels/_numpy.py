"""Vectorised numpy kernels (fallback backend)."""
import math

import numpy as np
from scipy.special import log_ndtr

from ._common import PI, TRUNC


def _prob_exponential(z):
    fz = 0.125 * PI * PI + 0.5 * z * z
    rt = math.sqrt(1.0 / TRUNC)
    x0 = np.log(fz) + fz * TRUNC
    xb = x0 - z + log_ndtr(rt * (TRUNC * z - 1.0))
    xa = x0 + z + log_ndtr(-rt * (TRUNC * z + 1.0))
    lq = math.log(4.0 / PI) + np.logaddexp(xb, xa)
    return 0.5 * (1.0 - np.tanh(0.5 * lq))  # 1 / (1 + exp(lq))


def _series_coef(n, x):
    k = n + 0.5
    with np.errstate(over="ignore", under="ignore"):
        right = PI * k * np.exp(-0.5 * k * k * PI * PI * x)
        left = PI * k * (2.0 / (PI * x)) ** 1.5 * np.exp(-2.0 * k * k / x)
    return np.where(x > TRUNC, right, left)


def _truncated_inv_gauss(rng, z):
    out = np.empty_like(z)
    small = z < 1.0 / TRUNC

    idx = np.flatnonzero(small)
    while idx.size:
        m = idx.size
        e1 = rng.standard_exponential(m)
        e2 = rng.standard_exponential(m)
        ok = e1 * e1 <= 2.0 * e2 / TRUNC
        cand = idx[ok]
        x = TRUNC / (1.0 + e1[ok] * TRUNC) ** 2
        keep = rng.random(cand.size) <= np.exp(-0.5 * z[cand] ** 2 * x)
        out[cand[keep]] = x[keep]
        done = np.zeros(m, dtype=bool)
        done[np.flatnonzero(ok)[keep]] = True
        idx = idx[~done]

    idx = np.flatnonzero(~small)
    while idx.size:
        x = rng.wald(1.0 / z[idx], 1.0)
        keep = x <= TRUNC
        out[idx[keep]] = x[keep]
        idx = idx[~keep]
    return out


def _series_accept(rng, x):
    s = _series_coef(0, x)
    y = rng.random(x.size) * s
    accepted = np.zeros(x.size, dtype=bool)
    live = np.arange(x.size)
    n = 0
    while live.size:
        n += 1
        xs = x[live]
        if n % 2 == 1:
            s[live] -= _series_coef(n, xs)
            hit = y[live] <= s[live]
            accepted[live[hit]] = True
            live = live[~hit]
        else:
            s[live] += _series_coef(n, xs)
            live = live[y[live] <= s[live]]
    return accepted


def pg1_many(rng, c):
    """Exact PG(1, c_i) draws for every entry of ``c``."""
    z = 0.5 * np.abs(np.asarray(c, dtype=float))
    out = np.empty_like(z)
    pending = np.arange(z.size)
    while pending.size:
        zz = z[pending]
        fz = 0.125 * PI * PI + 0.5 * zz * zz
        use_exp = rng.random(zz.size) < _prob_exponential(zz)
        x = np.empty_like(zz)
        x[use_exp] = TRUNC + rng.standard_exponential(int(use_exp.sum())) / fz[use_exp]
        x[~use_exp] = _truncated_inv_gauss(rng, zz[~use_exp])
        ok = _series_accept(rng, x)
        out[pending[ok]] = 0.25 * x[ok]
        pending = pending[~ok]
    return out


def _tail_moments(a, n_terms, partial):
    # vectorised twin of _common.series_tail_moments
    safe = np.where(a > 0, a, 1.0)
    total = np.where(a > 0, PI * np.tanh(PI * safe) / (2.0 * safe), PI * PI / 2.0)
    t1 = np.maximum(total - partial, 0.0)
    K = float(n_terms)
    x = a / K
    series = 1.0 / (3.0 * K**3) - 2.0 * a * a / (5.0 * K**5)
    closed = (np.arctan(x) - x / (1.0 + x * x)) / (2.0 * safe**3)
    return t1, np.where(x < 1e-3, series, closed)


def pg_series(rng, b, c, n_terms):
    b = np.asarray(b, dtype=float)
    a = np.abs(np.asarray(c, dtype=float)) / (2.0 * PI)
    k = np.arange(1, n_terms + 1) - 0.5
    d = k[None, :] ** 2 + a[:, None] ** 2
    g = rng.standard_gamma(np.broadcast_to(b[:, None], d.shape))
    acc = (g / d).sum(axis=1)
    t1, t2 = _tail_moments(a, n_terms, (1.0 / d).sum(axis=1))
    mean = b * t1
    var = b * t2
    pos = (mean > 0) & (var > 0)
    shape = np.where(pos, mean**2 / np.where(pos, var, 1.0), 1.0)
    scale = np.where(pos, var / np.where(pos, mean, 1.0), 0.0)
    acc += rng.standard_gamma(shape) * scale
    return acc / (2.0 * PI * PI)


def polya_gamma(rng, b, c, n_terms):
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    out = np.empty(c.shape[0])
    integral = b == np.floor(b)
    idx = np.flatnonzero(integral)
    if idx.size:
        counts = b[idx].astype(np.int64)
        draws = pg1_many(rng, np.repeat(c[idx], counts))
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        out[idx] = np.add.reduceat(draws, starts)
    idx = np.flatnonzero(~integral)
    if idx.size:
        out[idx] = pg_series(rng, b[idx], c[idx], n_terms)
    return out


def geyer_tau(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    xc = x - x.mean()
    g0 = np.dot(xc, xc) / n
    total = 0.0
    prev = np.inf
    lag = 0
    while lag + 1 < n:
        pair = (np.dot(xc[: n - lag], xc[lag:]) + np.dot(xc[: n - lag - 1], xc[lag + 1 :])) / n
        if pair <= 0.0:
            break
        pair = min(pair, prev)
        total += pair
        prev = pair
        lag += 2
    return -1.0 + 2.0 * total / g0, lag
