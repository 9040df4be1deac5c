"""Hot inner loops with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``HSGIBBS_DISABLE_NUMBA`` is unset (or ``0``). Both paths consume the
caller's :class:`numpy.random.Generator`, so results are reproducible per
backend; the two backends use different proposal bookkeeping and are
therefore equal in distribution, not draw for draw.
"""
from __future__ import annotations

import os

from . import _numpy

_DISABLED = os.environ.get("HSGIBBS_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by HSGIBBS_DISABLE_NUMBA")
    from . import _numba
except ImportError:  # pragma: no cover - depends on environment
    _numba = None

USE_NUMBA = _numba is not None

BACKENDS = {"numpy": _numpy}
if _numba is not None:
    BACKENDS["numba"] = _numba

_active = _numba if USE_NUMBA else _numpy


def active_backend() -> str:
    return "numba" if _active is _numba and _numba is not None else "numpy"


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (default: the active one)."""
    if name is None:
        return _active
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def polya_gamma(rng, b, c, n_terms=200):
    return _active.polya_gamma(rng, b, c, n_terms)


def geyer_tau(x):
    return _active.geyer_tau(x)
