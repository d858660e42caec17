"""Counter-based random streams keyed by (seed, indices..., purpose)."""

from __future__ import annotations

import zlib

import numpy as np


def _tag(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def stream(seed: int, *keys: int, purpose: str = "default") -> np.random.Generator:
    """Return an independent Philox generator for the given key path.

    The same ``(seed, keys, purpose)`` always yields the same stream, no matter
    which process or thread asks for it, so a single trial can be replayed in
    isolation.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    spawn_key = tuple(int(k) for k in keys) + (_tag(purpose),)
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(ss))


def as_generator(seed, purpose: str = "default") -> np.random.Generator:
    """Accept an int seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return stream(int(seed), purpose=purpose)
