"""Error norms and the location of the worst-case error."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def _pair(x, xhat):
    x = np.asarray(x, dtype=np.float64)
    xhat = np.asarray(xhat, dtype=np.float64)
    if x.shape != xhat.shape or x.ndim != 1 or x.size == 0:
        raise ValueError(f"expected equal-length non-empty vectors, got {x.shape} and {xhat.shape}")
    return x, xhat


def _scaled_l2(d: np.ndarray, peak: float) -> float:
    # dividing by the peak first keeps squares away from under/overflow
    if peak == 0.0 or not np.isfinite(peak):
        return float(np.linalg.norm(d))
    return peak * float(np.sqrt(np.sum((d / peak) ** 2)))


def linf_error(x, xhat) -> float:
    x, xhat = _pair(x, xhat)
    return float(np.max(np.abs(xhat - x)))


def l2_error(x, xhat) -> float:
    x, xhat = _pair(x, xhat)
    d = xhat - x
    return _scaled_l2(d, float(np.max(np.abs(d))))


def argmax_error(x, xhat, labels) -> tuple[int, int]:
    """Index of the largest absolute error (first on ties) and its label."""
    x, xhat = _pair(x, xhat)
    labels = np.asarray(labels)
    if labels.shape != x.shape:
        raise ValueError("labels must match the signal length")
    i = int(np.argmax(np.abs(xhat - x)))
    return i, int(labels[i])


@dataclass(frozen=True)
class ErrorReport:
    linf: float
    l2: float
    argmax_index: int
    argmax_label: int


def error_report(x, xhat, labels) -> ErrorReport:
    x, xhat = _pair(x, xhat)
    err = np.abs(xhat - x)
    i = int(np.argmax(err))
    labels = np.asarray(labels)
    if labels.shape != x.shape:
        raise ValueError("labels must match the signal length")
    return ErrorReport(float(err[i]), _scaled_l2(xhat - x, float(err[i])), i, int(labels[i]))


def localization_frequency(trials: Sequence[ErrorReport], target_label: int) -> tuple[float, float]:
    """Fraction of trials whose worst error sits on ``target_label``, with binomial SE."""
    if len(trials) == 0:
        raise ValueError("need at least one trial")
    hits = sum(1 for t in trials if t.argmax_label == target_label)
    p = hits / len(trials)
    return p, math.sqrt(p * (1.0 - p) / len(trials))
