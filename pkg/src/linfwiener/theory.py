"""Closed-form predictions: residual distributions, extreme-value scales, typical sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import NoiseModel
from .priors import (BernoulliGaussianPrior, GaussianMixturePrior, Prior,
                     largest_variance_component)


@dataclass(frozen=True)
class NormalParams:
    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance >= 0.0:
            raise ValueError(f"variance must be >= 0, got {self.variance}")


@dataclass(frozen=True)
class TypicalSetSpec:
    epsilons: tuple[float, ...]
    delta: float


def error_pattern_bg(prior: BernoulliGaussianPrior, noise: NoiseModel) -> tuple[NormalParams, NormalParams]:
    """Distribution of the Wiener residual ``xhat - x`` on the Gaussian and the zero set."""
    vx, vz, mx = prior.variance_x, noise.variance_z, prior.mean_x
    tot = vx + vz
    on_support = NormalParams(0.0, vx * vz / tot)
    off_support = NormalParams(vz * mx / tot, vx * vx * vz / (tot * tot))
    return on_support, off_support


def error_pattern_gm(prior: GaussianMixturePrior, noise: NoiseModel, k: int) -> NormalParams:
    """Residual distribution of the GM Wiener filter on indices drawn from component ``k``."""
    if not 0 <= k < prior.k:
        raise ValueError(f"component index {k} out of range for K={prior.k}")
    m = prior.components[largest_variance_component(prior)]
    ck = prior.components[k]
    vz = noise.variance_z
    tot = m.variance + vz
    mean = vz / tot * (m.mean - ck.mean)
    var = (vz * vz * ck.variance + m.variance * m.variance * vz) / (tot * tot)
    return NormalParams(mean, var)


def gnedenko_normalizer(n: int, variance: float) -> float:
    """sqrt(2 * variance * ln n), the scale of the maximum of n Gaussian magnitudes."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    return math.sqrt(2.0 * variance * math.log(n))


def lemma1_statistic(u, variance: float) -> float:
    u = np.asarray(u, dtype=np.float64)
    return float(np.max(np.abs(u))) / gnedenko_normalizer(u.size, variance)


def asymptotic_linf_constant(prior: Prior, noise: NoiseModel) -> float:
    """Limit of E||x - xhat_W||_inf / sqrt(ln N) for the matching Wiener filter."""
    if isinstance(prior, BernoulliGaussianPrior):
        worst = error_pattern_bg(prior, noise)[0].variance
    else:
        worst = error_pattern_gm(prior, noise, largest_variance_component(prior)).variance
    return math.sqrt(2.0 * worst)


def typical_set_delta_bg(s: float, epsilon: float) -> float:
    if not 0.0 < s < 1.0:
        raise ValueError(f"s must lie in (0, 1), got {s}")
    if s == 0.5:
        raise ValueError("the Bernoulli-Gaussian bound is not defined at s = 0.5")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    return epsilon * abs(math.log2(s / (1.0 - s)))


def typical_set_delta_gm(weights: Sequence[float], epsilons: Sequence[float]) -> float:
    if len(weights) != len(epsilons):
        raise ValueError("weights and epsilons must have equal length")
    if any(not 0.0 < w <= 1.0 for w in weights):
        raise ValueError("weights must lie in (0, 1]")
    if any(not e > 0.0 for e in epsilons):
        raise ValueError("epsilons must be positive")
    return math.fsum(e * abs(math.log2(w)) for w, e in zip(weights, epsilons))


def typical_set_spec(prior: Prior, epsilon) -> TypicalSetSpec:
    eps = _epsilons(prior, epsilon)
    if isinstance(prior, BernoulliGaussianPrior):
        delta = typical_set_delta_bg(prior.s, eps[1])
    else:
        delta = typical_set_delta_gm(prior.weights, eps)
    return TypicalSetSpec(eps, delta)


def _epsilons(prior: Prior, epsilon) -> tuple[float, ...]:
    if np.ndim(epsilon) == 0:
        return (float(epsilon),) * prior.n_labels
    eps = tuple(float(e) for e in epsilon)
    if isinstance(prior, BernoulliGaussianPrior) and len(eps) == 1:
        eps = eps * 2
    if len(eps) != prior.n_labels:
        raise ValueError(f"expected {prior.n_labels} epsilons, got {len(eps)}")
    return eps


def typical_set_membership(labels, prior: Prior, epsilon) -> bool:
    """True when every label frequency lies strictly within its epsilon of its weight.

    For a Bernoulli-Gaussian prior only the Gaussian-set frequency is checked;
    the zero-set condition follows from it.
    """
    labels = np.asarray(labels)
    eps = _epsilons(prior, epsilon)
    freq = np.bincount(labels, minlength=prior.n_labels)[: prior.n_labels] / labels.size
    w = prior.weights
    if isinstance(prior, BernoulliGaussianPrior):
        return bool(abs(freq[1] - w[1]) < eps[1])
    return bool(np.all(np.abs(freq - w) < np.asarray(eps)))


def default_epsilon(n: int) -> float:
    """epsilon(N) = N^(-1/4): vanishes with N while membership still tends to 1."""
    return float(n) ** -0.25
