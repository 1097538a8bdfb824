"""Seeded random streams.

Every stochastic routine takes either a seed or a ``numpy.random.Generator``.
Seeds are turned into Philox (counter-based) generators keyed by
``(seed, label)`` so that each operation draws from its own stream and
results do not depend on what ran before.
"""

import zlib

import numpy as np


def stream(seed, label="default"):
    """Return an independent generator for ``(seed, label)``.

    A ``Generator`` passes through unchanged, which lets callers thread one
    stream through a sequence of calls.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        return np.random.Generator(np.random.Philox())
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    key = zlib.crc32(label.encode("utf-8"))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), key])))


def spawn(rng, count):
    """Split ``rng`` into ``count`` independent child generators."""
    return rng.spawn(count)
