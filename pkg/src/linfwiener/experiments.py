"""Seeded Monte Carlo campaigns with CSV / JSON reporting.

Every trial draws from its own counter-based stream keyed by
``(seed, n, trial, purpose)`` and results are reduced in trial order, so the
output files do not depend on how many worker processes ran the trials.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from functools import partial
from typing import Iterable, Sequence

from . import theory
from .channel import NoiseModel, awgn
from .estimators import EstimatorSpec
from .metrics import error_report
from .oracle import MAX_N, OracleConfig, min_linf_oracle
from .priors import (BernoulliGaussianPrior, GaussianComponent, GaussianMixturePrior,
                     Prior, sample)
from .rng import stream

SCHEMA_VERSION = "linfwiener.summary/1"
CSV_HEADER = ("n", "trial", "estimator", "linf", "l2", "argmax_index", "argmax_label",
              "normalized_linf", "in_typical_set")
ORACLE = "oracle"
WIENER_KINDS = ("wiener_gm", "wiener_bg")


class ConfigError(ValueError):
    """Raised for malformed or inconsistent experiment configurations."""


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class ExperimentConfig:
    prior: Prior
    noise_variance: float
    estimators: tuple[str, ...]
    n_values: tuple[int, ...] = (1000, 10_000, 100_000, 1_000_000)
    trials: int = 100
    seed: int = 0
    epsilon_schedule: object = "n^-1/4"
    output_path: str | None = None
    oracle: OracleConfig = field(default_factory=OracleConfig)
    workers: int = 1
    allow_large_n: bool = False

    def __post_init__(self):
        object.__setattr__(self, "estimators", tuple(self.estimators))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.n_values or any(n < 2 for n in self.n_values):
            raise ConfigError("every n must be >= 2")
        if max(self.n_values) > 1_000_000 and not self.allow_large_n:
            raise ConfigError("n above 10^6 needs allow_large_n")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.estimators:
            raise ConfigError("at least one estimator is required")
        if not self.noise_variance >= 0:
            raise ConfigError("noise_variance must be >= 0")
        noise = NoiseModel(self.noise_variance)
        for kind in self.estimators:
            if kind == ORACLE:
                if max(self.n_values) > MAX_N:
                    raise ConfigError(f"the oracle estimator is limited to n <= {MAX_N}")
                if noise.variance_z <= 0:
                    raise ConfigError("the oracle estimator needs noise_variance > 0")
                continue
            try:
                EstimatorSpec(kind, self.prior, noise)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        for n in self.n_values:
            self.epsilon(n)

    @property
    def noise(self) -> NoiseModel:
        return NoiseModel(self.noise_variance)

    def epsilon(self, n: int) -> float:
        sched = self.epsilon_schedule
        if sched == "n^-1/4":
            return theory.default_epsilon(n)
        if isinstance(sched, (int, float)) and not isinstance(sched, bool):
            if sched <= 0:
                raise ConfigError("epsilon must be positive")
            return float(sched)
        if isinstance(sched, (list, tuple)):
            if len(sched) != len(self.n_values):
                raise ConfigError("an explicit epsilon_schedule needs one value per n")
            eps = float(sched[self.n_values.index(n)])
            if eps <= 0:
                raise ConfigError("epsilon must be positive")
            return eps
        raise ConfigError(f"unknown epsilon_schedule {sched!r}")


_CONFIG_KEYS = {"prior", "noise_variance", "estimators", "n_values", "trials", "seed",
                "epsilon_schedule", "output_path", "oracle", "workers", "allow_large_n"}
_ORACLE_KEYS = {"posterior_samples", "iterations", "step_scale"}


def prior_from_dict(d: dict) -> Prior:
    if not isinstance(d, dict):
        raise ConfigError("prior must be a JSON object")
    kind = d.get("type")
    try:
        if kind == "bg":
            _check_keys(d, {"type", "s", "mean", "variance"}, "prior")
            return BernoulliGaussianPrior(float(d["s"]), float(d.get("mean", 0.0)),
                                          float(d["variance"]))
        if kind == "gm":
            _check_keys(d, {"type", "components"}, "prior")
            comps = []
            for c in d["components"]:
                _check_keys(c, {"weight", "mean", "variance"}, "component")
                comps.append(GaussianComponent(float(c["weight"]), float(c["mean"]),
                                               float(c["variance"])))
            return GaussianMixturePrior(tuple(comps))
    except KeyError as exc:
        raise ConfigError(f"prior is missing {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid prior: {exc}") from None
    raise ConfigError(f"prior type must be 'bg' or 'gm', got {kind!r}")


def prior_to_dict(prior: Prior) -> dict:
    if isinstance(prior, BernoulliGaussianPrior):
        return {"type": "bg", "s": prior.s, "mean": prior.mean_x, "variance": prior.variance_x}
    return {"type": "gm", "components": [asdict(c) for c in prior.components]}


def _check_keys(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")


def config_from_dict(d: dict) -> ExperimentConfig:
    _check_keys(d, _CONFIG_KEYS, "config")
    for key in ("prior", "noise_variance", "estimators"):
        if key not in d:
            raise ConfigError(f"config is missing {key!r}")
    oracle = d.get("oracle", {})
    _check_keys(oracle, _ORACLE_KEYS, "oracle")
    kwargs = {k: v for k, v in d.items() if k not in ("prior", "oracle")}
    try:
        ocfg = OracleConfig(seed=0, **oracle)
        for k in ("n_values", "estimators"):
            if k in kwargs:
                kwargs[k] = tuple(kwargs[k])
        if isinstance(kwargs.get("epsilon_schedule"), list):
            kwargs["epsilon_schedule"] = tuple(kwargs["epsilon_schedule"])
        return ExperimentConfig(prior=prior_from_dict(d["prior"]), oracle=ocfg, **kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path) -> dict:
    """Read a JSON config file. I/O problems propagate as OSError."""
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None


def config_echo(cfg: ExperimentConfig) -> dict:
    # workers and output_path are left out so the summary is identical across runs
    sched = cfg.epsilon_schedule
    return {
        "prior": prior_to_dict(cfg.prior),
        "noise_variance": cfg.noise_variance,
        "estimators": list(cfg.estimators),
        "n_values": list(cfg.n_values),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "epsilon_schedule": list(sched) if isinstance(sched, tuple) else sched,
        "oracle": {"posterior_samples": cfg.oracle.posterior_samples,
                   "iterations": cfg.oracle.iterations,
                   "step_scale": cfg.oracle.step_scale},
    }


# ---------------------------------------------------------------------------
# trials

@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial_index: int
    estimator: str
    linf: float
    l2: float
    argmax_index: int
    argmax_label: int
    normalized_linf: float
    in_typical_set: bool

    def row(self) -> list:
        return [self.n, self.trial_index, self.estimator, repr(self.linf), repr(self.l2),
                self.argmax_index, self.argmax_label, repr(self.normalized_linf),
                int(self.in_typical_set)]


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> list[TrialRecord]:
    """One independent trial: sample, transmit, estimate with every configured estimator."""
    signal = sample(cfg.prior, n, stream(cfg.seed, n, trial, purpose="signal"))
    r = awgn(signal.values, cfg.noise, stream(cfg.seed, n, trial, purpose="noise"))
    typical = theory.typical_set_membership(signal.labels, cfg.prior, cfg.epsilon(n))
    scale = math.sqrt(math.log(n))
    out = []
    for kind in cfg.estimators:
        if kind == ORACLE:
            oseed = int(stream(cfg.seed, n, trial, purpose="oracle").integers(2**63))
            ocfg = OracleConfig(cfg.oracle.posterior_samples, cfg.oracle.iterations,
                                cfg.oracle.step_scale, oseed)
            xhat = min_linf_oracle(r, cfg.prior, cfg.noise, ocfg)
        else:
            xhat = EstimatorSpec(kind, cfg.prior, cfg.noise)(r, signal.labels)
        rep = error_report(signal.values, xhat, signal.labels)
        out.append(TrialRecord(n, trial, kind, rep.linf, rep.l2, rep.argmax_index,
                               rep.argmax_label, rep.linf / scale, typical))
    return out


def _run_task(cfg, task):
    return run_trial(cfg, *task)


def _parallel_map(fn, tasks: Sequence, workers: int) -> list:
    """Map in task order; results are identical for any worker count."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# ---------------------------------------------------------------------------
# aggregation

def mean_se(values: Sequence[float]) -> tuple[float, float | None]:
    """Mean with compensated summation and the unbiased standard error."""
    t = len(values)
    mean = math.fsum(values) / t
    if t < 2:
        return mean, None
    var = math.fsum((v - mean) ** 2 for v in values) / (t - 1)
    return mean, math.sqrt(var / t)


def ratio_of_means(num: Sequence[float], den: Sequence[float]) -> tuple[float, float | None]:
    """Ratio of paired sample means with a delta-method standard error."""
    t = len(num)
    a, b = math.fsum(num) / t, math.fsum(den) / t
    r = a / b
    if t < 2:
        return r, None
    va = math.fsum((x - a) ** 2 for x in num) / (t - 1)
    vb = math.fsum((y - b) ** 2 for y in den) / (t - 1)
    cov = math.fsum((x - a) * (y - b) for x, y in zip(num, den)) / (t - 1)
    rel = va / (a * a) + vb / (b * b) - 2.0 * cov / (a * b)
    return r, abs(r) * math.sqrt(max(rel, 0.0) / t)


def _by(records, **match):
    return [rec for rec in records if all(getattr(rec, k) == v for k, v in match.items())]


def wiener_kind(cfg: ExperimentConfig) -> str | None:
    for kind in WIENER_KINDS:
        if kind in cfg.estimators:
            return kind
    return None


def ratio_rows(cfg: ExperimentConfig, records: Sequence[TrialRecord]) -> list[dict]:
    wk = wiener_kind(cfg)
    if wk is None or "genie_wiener" not in cfg.estimators:
        return []
    rows = []
    for n in cfg.n_values:
        w = [r.linf for r in _by(records, n=n, estimator=wk)]
        g = [r.linf for r in _by(records, n=n, estimator="genie_wiener")]
        ratio, se = ratio_of_means(w, g)
        rows.append({"n": n, "wiener": wk, "ratio": ratio, "ratio_se": se})
    return rows


def summarize(cfg: ExperimentConfig, records: Sequence[TrialRecord], kind: str = "simulate") -> dict:
    dominant = cfg.prior.dominant_label
    results = []
    for n in cfg.n_values:
        for est in cfg.estimators:
            recs = _by(records, n=n, estimator=est)
            linf_m, linf_se = mean_se([r.linf for r in recs])
            nl_m, nl_se = mean_se([r.normalized_linf for r in recs])
            l2_m, l2_se = mean_se([r.l2 for r in recs])
            loc = [1.0 if r.argmax_label == dominant else 0.0 for r in recs]
            loc_m = math.fsum(loc) / len(loc)
            typ = math.fsum(1.0 if r.in_typical_set else 0.0 for r in recs) / len(recs)
            results.append({
                "n": n, "estimator": est, "trials": len(recs),
                "linf_mean": linf_m, "linf_se": linf_se,
                "normalized_linf_mean": nl_m, "normalized_linf_se": nl_se,
                "l2_mean": l2_m, "l2_se": l2_se,
                "localization_label": dominant,
                "localization_frequency": loc_m,
                "localization_se": math.sqrt(loc_m * (1.0 - loc_m) / len(loc)),
                "typical_set_frequency": typ,
                "epsilon": cfg.epsilon(n),
            })
    predictions = {"dominant_label": dominant}
    if cfg.noise_variance > 0:
        predictions["asymptotic_linf_constant"] = theory.asymptotic_linf_constant(cfg.prior, cfg.noise)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "config": config_echo(cfg),
        "predictions": predictions,
        "results": results,
        "ratios": ratio_rows(cfg, records),
    }


# ---------------------------------------------------------------------------
# campaigns

@dataclass
class CampaignResult:
    summary: dict
    records: list = field(default_factory=list)

    def csv_text(self, header: Iterable[str] = CSV_HEADER) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for rec in self.records:
            w.writerow(rec.row())
        return buf.getvalue()

    def json_text(self) -> str:
        return json.dumps(self.summary, indent=2, allow_nan=False) + "\n"


def run_campaign(cfg: ExperimentConfig, workers: int | None = None, write: bool = True) -> CampaignResult:
    tasks = [(n, t) for n in cfg.n_values for t in range(cfg.trials)]
    per_trial = _parallel_map(partial(_run_task, cfg), tasks, workers or cfg.workers)
    records = [rec for recs in per_trial for rec in recs]
    result = CampaignResult(summarize(cfg, records), records)
    if write and cfg.output_path:
        write_outputs(cfg.output_path, result)
    return result


def ratio_campaign(cfg: ExperimentConfig, workers: int | None = None, write: bool = True) -> CampaignResult:
    """Wiener-to-genie sup-norm risk ratio for each n."""
    if wiener_kind(cfg) is None or "genie_wiener" not in cfg.estimators:
        raise ConfigError("ratio needs genie_wiener and wiener_gm or wiener_bg among the estimators")
    result = run_campaign(cfg, workers, write=False)
    result.summary["kind"] = "ratio"
    if write and cfg.output_path:
        write_outputs(cfg.output_path, result)
    return result


def oracle_campaign(cfg: ExperimentConfig, workers: int | None = None, write: bool = True) -> CampaignResult:
    """Small-n comparison of the sampled min-sup-norm oracle with the other estimators."""
    if ORACLE not in cfg.estimators:
        cfg = _replace(cfg, estimators=cfg.estimators + (ORACLE,))
    result = run_campaign(cfg, workers, write=False)
    result.summary["kind"] = "oracle"
    if write and cfg.output_path:
        write_outputs(cfg.output_path, result)
    return result


def _replace(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    kw = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    kw.update(changes)
    try:
        return ExperimentConfig(**kw)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- Lemma-1 extreme-value campaign -----------------------------------------

@dataclass(frozen=True)
class Lemma1Record:
    n: int
    trial_index: int
    statistic: float

    def row(self) -> list:
        return [self.n, self.trial_index, repr(self.statistic)]


LEMMA1_HEADER = ("n", "trial", "statistic")


def _lemma1_trial(params, task):
    seed, variance, mean = params
    n, trial = task
    rng = stream(seed, n, trial, purpose="lemma1")
    u = mean + math.sqrt(variance) * rng.standard_normal(n)
    return Lemma1Record(n, trial, theory.lemma1_statistic(u, variance))


def lemma1_campaign(n_values: Sequence[int], variance: float = 1.0, mean: float = 0.0,
                    trials: int = 100, seed: int = 0, workers: int = 1,
                    output_path: str | None = None) -> CampaignResult:
    """Monte Carlo of max|u_i| / sqrt(2 variance ln n) for i.i.d. N(mean, variance)."""
    n_values = tuple(int(n) for n in n_values)
    if not n_values or any(n < 2 for n in n_values):
        raise ConfigError("every n must be >= 2")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if not variance > 0:
        raise ConfigError("variance must be positive")
    if seed < 0:
        raise ConfigError("seed must be non-negative")
    tasks = [(n, t) for n in n_values for t in range(trials)]
    records = _parallel_map(partial(_lemma1_trial, (seed, float(variance), float(mean))),
                            tasks, workers)
    rows = []
    for n in n_values:
        m, se = mean_se([r.statistic for r in records if r.n == n])
        rows.append({"n": n, "trials": trials, "mean": m, "se": se})
    summary = {
        "schema_version": SCHEMA_VERSION,
        "kind": "lemma1",
        "config": {"n_values": list(n_values), "variance": variance, "mean": mean,
                   "trials": trials, "seed": seed},
        "results": rows,
    }
    result = CampaignResult(summary, records)
    if output_path:
        write_outputs(output_path, result, LEMMA1_HEADER)
    return result


_LEMMA1_KEYS = {"n_values", "variance", "mean", "trials", "seed", "output_path", "workers"}


def lemma1_kwargs(d: dict) -> dict:
    _check_keys(d, _LEMMA1_KEYS, "config")
    if "n_values" not in d:
        raise ConfigError("config is missing 'n_values'")
    return dict(d)


# ---------------------------------------------------------------------------
# output

def output_paths(path) -> tuple[str, str]:
    """CSV path and its sibling JSON summary path."""
    path = os.fspath(path)
    root, ext = os.path.splitext(path)
    if ext.lower() != ".csv":
        root, path = path, path + ".csv"
    return path, root + ".json"


def write_outputs(path, result: CampaignResult, header: Iterable[str] = CSV_HEADER) -> tuple[str, str]:
    csv_path, json_path = output_paths(path)
    parent = os.path.dirname(csv_path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        fh.write(result.csv_text(header))
    with open(json_path, "w") as fh:
        fh.write(result.json_text())
    return csv_path, json_path

