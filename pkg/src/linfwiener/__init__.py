"""Wiener filtering of Gaussian-mixture signals under sup-norm (l-infinity) error."""

from .channel import NoiseModel, awgn, channel_loglik
from .estimators import (EstimatorSpec, genie_wiener, identity, posterior_mean,
                         wiener_bg, wiener_gm)
from .metrics import (ErrorReport, argmax_error, error_report, l2_error, linf_error,
                      localization_frequency)
from .oracle import OracleConfig, min_linf_oracle, posterior_sample
from .priors import (BernoulliGaussianPrior, GaussianComponent, GaussianMixturePrior,
                     LabeledSignal, largest_variance_component, pdf_gm, sample_bg,
                     sample_gm)

__version__ = "0.1.0"
