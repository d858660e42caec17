import math

import numpy as np
import pytest
from scipy import integrate, stats

from linfwiener.channel import NoiseModel, awgn, channel_loglik
from linfwiener.rng import stream


def test_noiseless_channel_is_bitwise_identity():
    x = np.array([0.1, -3.0, 7.25, 1e-300])
    r = awgn(x, NoiseModel(0.0), seed=1)
    assert r.tobytes() == x.tobytes()


def test_unit_noise_variance():
    r = awgn(np.zeros(10**6), NoiseModel(1.0), seed=9)
    assert abs(r.var(ddof=1) - 1.0) < 0.006


def test_deterministic():
    x = np.linspace(-1, 1, 7)
    assert awgn(x, NoiseModel(2.0), 5).tobytes() == awgn(x, NoiseModel(2.0), 5).tobytes()


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        awgn(np.array([]), NoiseModel(1.0), 0)


def test_negative_variance_rejected():
    with pytest.raises(ValueError):
        NoiseModel(-1.0)


def test_pooled_residuals_are_normal():
    vz = 0.7
    resid = []
    for trial in range(4):
        x = np.arange(30_000, dtype=float) * 0.001
        resid.append(awgn(x, NoiseModel(vz), stream(2, trial, purpose="noise")) - x)
    pooled = np.concatenate(resid)
    assert stats.kstest(pooled, "norm", args=(0.0, math.sqrt(vz))).pvalue > 1e-3


def test_loglik_values():
    one = NoiseModel(1.0)
    assert channel_loglik(0.3, 0.3, one) == pytest.approx(-0.918939, abs=1e-6)
    assert channel_loglik(1.0, 0.0, one) == pytest.approx(-1.418939, abs=1e-6)


def test_loglik_against_quadrature_normalization():
    # the density exp(loglik) must integrate to one over r and peak at the closed form
    noise = NoiseModel(4.0)
    val = channel_loglik(2.0, 0.0, noise)
    assert val == pytest.approx(-0.5 * math.log(8 * math.pi) - 0.5, abs=1e-12)
    assert val == pytest.approx(-2.112086, abs=1e-6)
    total, _ = integrate.quad(lambda r: math.exp(channel_loglik(r, 0.0, noise)), -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_loglik_symmetric():
    noise = NoiseModel(1.3)
    assert channel_loglik(2.5, 1.0, noise) == channel_loglik(1.0, 2.5, noise)


def test_loglik_rejects_noiseless():
    with pytest.raises(ValueError):
        channel_loglik(0.0, 0.0, NoiseModel(0.0))
