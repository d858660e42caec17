"""Parallel additive white Gaussian noise channel."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import as_generator

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class NoiseModel:
    variance_z: float

    def __post_init__(self):
        if not self.variance_z >= 0.0:
            raise ValueError(f"noise variance must be >= 0, got {self.variance_z}")


def awgn(x, noise: NoiseModel, seed) -> np.ndarray:
    """Return ``r = x + z`` with ``z`` i.i.d. N(0, variance_z).

    A zero-variance channel returns a copy of ``x`` without drawing noise.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("awgn needs a non-empty 1-D signal")
    if noise.variance_z == 0.0:
        return x.copy()
    rng = as_generator(seed, "noise")
    return x + math.sqrt(noise.variance_z) * rng.standard_normal(x.size)


def channel_loglik(r, x, noise: NoiseModel):
    """Log of the Gaussian transition density f(r | x)."""
    if noise.variance_z <= 0.0:
        raise ValueError("channel log-likelihood is undefined for a noiseless channel")
    d = np.asarray(r, dtype=np.float64) - np.asarray(x, dtype=np.float64)
    return -0.5 * (_LOG_2PI + math.log(noise.variance_z)) - 0.5 * d * d / noise.variance_z
