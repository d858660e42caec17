"""Gaussian-mixture and Bernoulli-Gaussian signal priors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .rng import as_generator

# Label of the Gaussian part of a Bernoulli-Gaussian signal (atom at zero is 0).
BG_GAUSSIAN = 1
BG_ATOM = 0


@dataclass(frozen=True)
class GaussianComponent:
    weight: float
    mean: float
    variance: float

    def __post_init__(self):
        # weight 1 is only meaningful for K = 1; the mixture checks that
        if not 0.0 < self.weight <= 1.0:
            raise ValueError(f"component weight must lie in (0, 1], got {self.weight}")
        if not self.variance > 0.0:
            raise ValueError(f"component variance must be positive, got {self.variance}")


@dataclass(frozen=True)
class GaussianMixturePrior:
    """K-component i.i.d. Gaussian mixture.

    A single component is stored with weight 1.0; with K >= 2 every weight must
    lie strictly inside (0, 1).
    """

    components: tuple[GaussianComponent, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) < 1:
            raise ValueError("a mixture needs at least one component")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        if len(comps) > 1 and any(c.weight >= 1.0 for c in comps):
            raise ValueError("weights must lie strictly in (0, 1) when K >= 2")

    @classmethod
    def from_arrays(cls, weights, means, variances) -> "GaussianMixturePrior":
        if not len(weights) == len(means) == len(variances):
            raise ValueError("weights, means and variances must have equal length")
        return cls(tuple(GaussianComponent(float(w), float(m), float(v))
                         for w, m, v in zip(weights, means, variances)))

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components], dtype=np.float64)

    @property
    def means(self) -> np.ndarray:
        return np.array([c.mean for c in self.components], dtype=np.float64)

    @property
    def variances(self) -> np.ndarray:
        return np.array([c.variance for c in self.components], dtype=np.float64)

    def mixture(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.weights, self.means, self.variances

    @property
    def n_labels(self) -> int:
        return self.k

    @property
    def dominant_label(self) -> int:
        return largest_variance_component(self)


@dataclass(frozen=True)
class BernoulliGaussianPrior:
    """Gaussian with probability ``s``, exact zero otherwise."""

    s: float
    mean_x: float
    variance_x: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        if not self.variance_x > 0.0:
            raise ValueError(f"variance_x must be positive, got {self.variance_x}")

    def mixture(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Mixture arrays indexed by label; the atom is a zero-variance component."""
        return (np.array([1.0 - self.s, self.s]),
                np.array([0.0, self.mean_x]),
                np.array([0.0, self.variance_x]))

    @property
    def weights(self) -> np.ndarray:
        return np.array([1.0 - self.s, self.s])

    @property
    def n_labels(self) -> int:
        return 2

    @property
    def dominant_label(self) -> int:
        return BG_GAUSSIAN


Prior = Union[GaussianMixturePrior, BernoulliGaussianPrior]


@dataclass(frozen=True)
class LabeledSignal:
    values: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.labels.shape or self.values.ndim != 1:
            raise ValueError("values and labels must be 1-D arrays of equal length")

    def __len__(self):
        return self.values.shape[0]


def sample_bg(prior: BernoulliGaussianPrior, n: int, seed) -> LabeledSignal:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = as_generator(seed, "signal")
    active = rng.random(n) < prior.s
    gauss = prior.mean_x + math.sqrt(prior.variance_x) * rng.standard_normal(n)
    values = np.where(active, gauss, 0.0)
    return LabeledSignal(values, active.astype(np.int64))


def sample_gm(prior: GaussianMixturePrior, n: int, seed) -> LabeledSignal:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not isinstance(prior, GaussianMixturePrior):
        raise ValueError("sample_gm needs a GaussianMixturePrior")
    rng = as_generator(seed, "signal")
    w, mu, var = prior.mixture()
    # inverse-CDF label draw keeps the stream layout independent of K
    cdf = np.cumsum(w)
    cdf[-1] = 1.0
    labels = np.searchsorted(cdf, rng.random(n), side="right").astype(np.int64)
    values = mu[labels] + np.sqrt(var)[labels] * rng.standard_normal(n)
    return LabeledSignal(values, labels)


def sample(prior: Prior, n: int, seed) -> LabeledSignal:
    if isinstance(prior, BernoulliGaussianPrior):
        return sample_bg(prior, n, seed)
    return sample_gm(prior, n, seed)


def pdf_gm(prior: GaussianMixturePrior, x):
    """Mixture density evaluated at ``x`` (scalar or array)."""
    w, mu, var = prior.mixture()
    x = np.asarray(x, dtype=np.float64)
    d = x[..., None] - mu
    dens = w * np.exp(-0.5 * d * d / var) / np.sqrt(2.0 * np.pi * var)
    out = dens.sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def largest_variance_component(prior: GaussianMixturePrior) -> int:
    # np.argmax returns the first maximum, i.e. lowest index on ties
    return int(np.argmax(prior.variances))
