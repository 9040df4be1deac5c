"""Seedable, splittable random streams.

A stream is a plain :class:`numpy.random.Generator`; nothing in the package
touches the global numpy RNG. Independent child streams are derived through
:class:`numpy.random.SeedSequence` spawning, so chains started from one master
seed never share state.
"""
from __future__ import annotations

import numpy as np

RandomStream = np.random.Generator


def make_stream(seed: int | np.random.SeedSequence | None = None) -> RandomStream:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def split_streams(seed: int | None, k: int) -> list[RandomStream]:
    """Return ``k`` independent streams spawned from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(k)
    return [make_stream(c) for c in children]


def spawn(rng: RandomStream, k: int) -> list[RandomStream]:
    """Split ``k`` independent child streams off an existing stream."""
    return list(rng.spawn(k))
