"""Componentwise estimators of x from r = x + z."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .channel import NoiseModel
from .priors import (BernoulliGaussianPrior, GaussianMixturePrior, Prior,
                     largest_variance_component)

KINDS = ("wiener_bg", "wiener_gm", "posterior_mean", "genie_wiener", "identity")


def wiener_gain(signal_variance: float, noise_variance: float) -> float:
    return signal_variance / (signal_variance + noise_variance)


def _affine_wiener(r, mean, variance, noise_variance):
    r = np.asarray(r, dtype=np.float64)
    if noise_variance == 0.0:
        return r.copy()
    return wiener_gain(variance, noise_variance) * (r - mean) + mean


def wiener_bg(r, prior: BernoulliGaussianPrior, noise: NoiseModel) -> np.ndarray:
    return _affine_wiener(r, prior.mean_x, prior.variance_x, noise.variance_z)


def wiener_gm(r, prior: GaussianMixturePrior, noise: NoiseModel) -> np.ndarray:
    """Single Wiener filter tuned to the largest-variance component."""
    m = largest_variance_component(prior)
    c = prior.components[m]
    return _affine_wiener(r, c.mean, c.variance, noise.variance_z)


def responsibilities(r, prior: Prior, noise: NoiseModel) -> np.ndarray:
    """Posterior component probabilities, shape (N, K), computed in log space."""
    if noise.variance_z <= 0.0:
        raise ValueError("posterior quantities need a positive noise variance")
    w, mu, var = prior.mixture()
    r = np.asarray(r, dtype=np.float64)[:, None]
    tot = var + noise.variance_z
    logp = np.log(w) - 0.5 * np.log(2.0 * np.pi * tot) - 0.5 * (r - mu) ** 2 / tot
    return np.exp(logp - logsumexp(logp, axis=1, keepdims=True))


def component_posteriors(r, prior: Prior, noise: NoiseModel):
    """Per-component posterior means and variances of x_i, each shape (N, K)."""
    _, mu, var = prior.mixture()
    r = np.asarray(r, dtype=np.float64)[:, None]
    vz = noise.variance_z
    tot = var + vz
    cmean = (var * r + vz * mu) / tot
    cvar = np.broadcast_to(var * vz / tot, cmean.shape)
    return cmean, cvar


def posterior_mean(r, prior: Prior, noise: NoiseModel) -> np.ndarray:
    resp = responsibilities(r, prior, noise)
    cmean, _ = component_posteriors(r, prior, noise)
    return (resp * cmean).sum(axis=1)


def genie_wiener(r, labels, prior: Prior, noise: NoiseModel) -> np.ndarray:
    """Wiener filter of each index's true component; atom indices map to 0."""
    r = np.asarray(r, dtype=np.float64)
    labels = np.asarray(labels)
    if labels.shape != r.shape:
        raise ValueError("labels and r must have the same shape")
    if labels.size and (labels.min() < 0 or labels.max() >= prior.n_labels):
        raise ValueError(f"labels must lie in [0, {prior.n_labels})")
    if isinstance(prior, BernoulliGaussianPrior):
        return np.where(labels == 1, wiener_bg(r, prior, noise), 0.0)
    mu, var = prior.means[labels], prior.variances[labels]
    if noise.variance_z == 0.0:
        return r.copy()
    return var / (var + noise.variance_z) * (r - mu) + mu


def identity(r) -> np.ndarray:
    return np.array(r, dtype=np.float64, copy=True)


@dataclass(frozen=True)
class EstimatorSpec:
    kind: str
    prior: Prior
    noise: NoiseModel

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown estimator {self.kind!r}; expected one of {KINDS}")
        if self.kind == "wiener_bg" and not isinstance(self.prior, BernoulliGaussianPrior):
            raise ValueError("wiener_bg requires a Bernoulli-Gaussian prior")
        if self.kind == "wiener_gm" and not isinstance(self.prior, GaussianMixturePrior):
            raise ValueError("wiener_gm requires a Gaussian-mixture prior")
        if self.kind == "posterior_mean" and self.noise.variance_z <= 0.0:
            raise ValueError("posterior_mean requires a positive noise variance")

    def __call__(self, r, labels=None) -> np.ndarray:
        if self.kind == "wiener_bg":
            return wiener_bg(r, self.prior, self.noise)
        if self.kind == "wiener_gm":
            return wiener_gm(r, self.prior, self.noise)
        if self.kind == "posterior_mean":
            return posterior_mean(r, self.prior, self.noise)
        if self.kind == "genie_wiener":
            if labels is None:
                raise ValueError("genie_wiener needs the true labels")
            return genie_wiener(r, labels, self.prior, self.noise)
        return identity(r)
