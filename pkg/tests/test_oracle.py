import math

import numpy as np
import pytest
import scipy.sparse as sp
from scipy import integrate
from scipy.optimize import linprog

from linfwiener.channel import NoiseModel
from linfwiener.estimators import posterior_mean, wiener_gm
from linfwiener.oracle import (OracleConfig, descend, min_linf_oracle, posterior_sample,
                               sampled_objective)
from linfwiener.priors import BernoulliGaussianPrior, GaussianMixturePrior

GAUSS = GaussianMixturePrior.from_arrays([1.0], [0.0], [1.0])


def _npdf(x, m, v):
    return math.exp(-0.5 * (x - m) ** 2 / v) / math.sqrt(2 * math.pi * v)


def lp_minimizer(samples):
    """Exact minimizer of the sampled objective as a linear program."""
    m, n = samples.shape
    c = np.r_[np.zeros(n), np.ones(m) / m]
    pick = sp.kron(sp.eye(m), np.ones((n, 1)))
    coord = sp.kron(np.ones((m, 1)), sp.eye(n))
    a = sp.vstack([sp.hstack([coord, -pick]), sp.hstack([-coord, -pick])]).tocsr()
    b = np.r_[samples.ravel(), -samples.ravel()]
    res = linprog(c, A_ub=a, b_ub=b, bounds=[(None, None)] * (n + m), method="highs")
    return res.x[:n], res.fun


def test_posterior_sample_gaussian_mean(unit_noise):
    r = np.array([1.5, -0.5, 3.0])
    s = posterior_sample(r, GAUSS, unit_noise, 100_000, seed=1)
    se = math.sqrt(0.5 / s.shape[0])
    assert np.all(np.abs(s.mean(axis=0) - wiener_gm(r, GAUSS, unit_noise)) < 4 * se)


def test_posterior_sample_atom_fraction():
    s_prob, vx, vz = 0.05, 1.0, 1.0
    prior, noise = BernoulliGaussianPrior(s_prob, 0.0, vx), NoiseModel(vz)
    # atom responsibility at r = 0 by quadrature over the Gaussian branch
    gauss_branch, _ = integrate.quad(lambda x: s_prob * _npdf(x, 0, vx) * _npdf(0.0, x, vz), -np.inf, np.inf)
    atom = (1 - s_prob) * _npdf(0.0, 0.0, vz)
    p_atom = atom / (atom + gauss_branch)
    m = 50_000
    draws = posterior_sample(np.array([0.0, 2.0]), prior, noise, m, seed=3)
    frac = np.mean(draws[:, 0] == 0.0)
    assert abs(frac - p_atom) < 4 * math.sqrt(p_atom * (1 - p_atom) / m)


def test_posterior_sample_deterministic(bg, unit_noise):
    r = np.array([0.1, 2.0])
    a = posterior_sample(r, bg, unit_noise, 500, seed=9)
    assert a.tobytes() == posterior_sample(r, bg, unit_noise, 500, seed=9).tobytes()


def test_posterior_sample_needs_noise(bg):
    with pytest.raises(ValueError):
        posterior_sample(np.zeros(2), bg, NoiseModel(0.0), 100, 0)


def test_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(posterior_samples=50)
    with pytest.raises(ValueError):
        OracleConfig(iterations=0)
    with pytest.raises(ValueError):
        OracleConfig(step_scale=0.0)


def test_refuses_large_n(bg, unit_noise):
    with pytest.raises(ValueError):
        min_linf_oracle(np.zeros(65), bg, unit_noise)


def test_descent_reaches_lp_optimum(bg, unit_noise):
    r = np.random.default_rng(4).normal(0, 1.4, 6)
    samples = posterior_sample(r, bg, unit_noise, 1000, seed=5)
    res = descend(samples, posterior_mean(r, bg, unit_noise), 2000, 0.5)
    _, f_lp = lp_minimizer(samples)
    assert res.objective <= f_lp * (1 + 1e-3)
    assert res.objective >= f_lp - 1e-9


def test_best_trace_non_increasing_and_no_worse_than_start(bg, unit_noise):
    r = np.array([0.0, 2.5, -1.0, 0.3])
    res = min_linf_oracle(r, bg, unit_noise, OracleConfig(iterations=300, seed=2), return_details=True)
    assert np.all(np.diff(res.best_trace) <= 0)
    assert res.objective <= res.initial_objective
    samples = posterior_sample(r, bg, unit_noise, 4096, 2)
    assert sampled_objective(res.estimate, samples) == pytest.approx(res.objective, rel=1e-12)
    assert res.objective <= sampled_objective(posterior_mean(r, bg, unit_noise), samples)


def test_tiny_noise_returns_observation(bg):
    r = np.array([0.7, -1.2, 2.0])
    out = min_linf_oracle(r, bg, NoiseModel(1e-10), OracleConfig(iterations=200))
    assert np.allclose(out, r, atol=1e-4)


def test_permutation_equivariance(bg, unit_noise):
    r = np.array([0.2, 1.7, -0.4, 2.9, -1.1])
    perm = np.array([3, 0, 4, 1, 2])
    samples = posterior_sample(r, bg, unit_noise, 800, seed=6)
    start = posterior_mean(r, bg, unit_noise)
    a = descend(samples, start, 400, 0.5).estimate
    b = descend(samples[:, perm], start[perm], 400, 0.5).estimate
    assert np.array_equal(a[perm], b)


def test_gaussian_prior_matches_wiener(unit_noise):
    # sampling noise of the sampled minimizer shrinks like 1/sqrt(samples); 65536
    # samples keep it inside 2% of a posterior standard deviation
    tol = 0.02 * math.sqrt(0.5)
    r = np.random.default_rng(11).normal(0, math.sqrt(2), 8)
    out = min_linf_oracle(r, GAUSS, unit_noise, OracleConfig(posterior_samples=65536, seed=1))
    assert np.max(np.abs(out - wiener_gm(r, GAUSS, unit_noise))) < tol
