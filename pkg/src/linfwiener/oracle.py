"""Small-N numerical surrogate for the minimum mean sup-norm error estimator.

The posterior is sampled once (sample-average approximation) and the convex
objective ``mean_s max_i |xhat_i - x_i^(s)|`` is minimized by projected-free
subgradient descent started at the posterior mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import NoiseModel
from .estimators import component_posteriors, posterior_mean, responsibilities
from .priors import Prior
from .rng import as_generator

MAX_N = 64


@dataclass(frozen=True)
class OracleConfig:
    posterior_samples: int = 4096
    iterations: int = 2000
    step_scale: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.posterior_samples < 100:
            raise ValueError("posterior_samples must be >= 100")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.step_scale > 0.0:
            raise ValueError("step_scale must be positive")


def posterior_sample(r, prior: Prior, noise: NoiseModel, m: int, seed) -> np.ndarray:
    """Draw ``m`` vectors from the exact componentwise posterior; shape (m, N)."""
    if noise.variance_z <= 0.0:
        raise ValueError("posterior sampling needs a positive noise variance")
    r = np.asarray(r, dtype=np.float64)
    rng = as_generator(seed, "posterior")
    resp = responsibilities(r, prior, noise)
    cmean, cvar = component_posteriors(r, prior, noise)
    cdf = np.cumsum(resp, axis=1)
    cdf[:, -1] = 1.0
    u = rng.random((m, r.size))
    comp = (u[:, :, None] >= cdf[None, :, :]).sum(axis=2)
    cols = np.arange(r.size)
    mean = cmean[cols, comp]
    sd = np.sqrt(cvar[cols, comp])
    draws = mean + sd * rng.standard_normal((m, r.size))
    # zero-variance (atom) components give exact point masses
    return np.where(sd == 0.0, mean, draws)


def sampled_objective(xhat, samples) -> float:
    return float(np.mean(np.max(np.abs(samples - xhat), axis=1)))


@dataclass
class OracleResult:
    estimate: np.ndarray
    objective: float
    initial_objective: float
    best_trace: np.ndarray


def descend(samples: np.ndarray, start: np.ndarray, iterations: int, step_scale: float) -> OracleResult:
    """Subgradient descent on the sampled sup-norm objective, best iterate kept."""
    m, n = samples.shape
    rows = np.arange(m)
    x = np.array(start, dtype=np.float64)
    best_x, best_f = x.copy(), math.inf
    trace = np.empty(iterations + 1)
    f0 = None
    for t in range(1, iterations + 2):
        d = x - samples
        j = np.argmax(np.abs(d), axis=1)
        dj = d[rows, j]
        f = float(np.mean(np.abs(dj)))
        if f0 is None:
            f0 = f
        if f < best_f:
            best_f, best_x = f, x.copy()
        trace[t - 1] = best_f
        if t > iterations:
            break
        g = np.bincount(j, weights=np.sign(dj), minlength=n) / m
        x = x - step_scale / math.sqrt(t) * g
    return OracleResult(best_x, best_f, f0, trace)


def min_linf_oracle(r, prior: Prior, noise: NoiseModel, cfg: OracleConfig = OracleConfig(),
                    *, return_details: bool = False):
    r = np.asarray(r, dtype=np.float64)
    if r.size > MAX_N:
        raise ValueError(f"the oracle is limited to N <= {MAX_N}, got N = {r.size}")
    if noise.variance_z <= 0.0:
        raise ValueError("the oracle needs a positive noise variance")
    samples = posterior_sample(r, prior, noise, cfg.posterior_samples, cfg.seed)
    res = descend(samples, posterior_mean(r, prior, noise), cfg.iterations, cfg.step_scale)
    return res if return_details else res.estimate
