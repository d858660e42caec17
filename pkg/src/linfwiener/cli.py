"""Command-line entry point: ``linfwiener {simulate,lemma1,ratio,oracle}``."""

from __future__ import annotations

import argparse
import sys

from . import experiments as ex

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linfwiener",
                                description="Wiener filtering of Gaussian-mixture signals under sup-norm error.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--trials", type=int, help="override the number of trials")
        sp.add_argument("--out", help="CSV output path; the JSON summary is written next to it")
        sp.add_argument("--workers", type=int, help="worker processes (results do not depend on it)")
        return sp

    common(sub.add_parser("simulate", help="Monte Carlo campaign over n and estimators"))
    common(sub.add_parser("lemma1", help="maximum of i.i.d. Gaussian magnitudes"))
    common(sub.add_parser("ratio", help="Wiener-to-genie sup-norm risk ratio"))
    o = common(sub.add_parser("oracle", help="small-n comparison against the sampled min-sup-norm oracle"))
    o.add_argument("--posterior-samples", type=int)
    o.add_argument("--iterations", type=int)
    o.add_argument("--step-scale", type=float)
    return p


def _overrides(args) -> dict:
    out = {}
    if args.seed is not None:
        out["seed"] = args.seed
    if args.trials is not None:
        out["trials"] = args.trials
    if args.out is not None:
        out["output_path"] = args.out
    if args.workers is not None:
        out["workers"] = args.workers
    return out


def _print_rows(rows, columns):
    print("\t".join(columns))
    for row in rows:
        print("\t".join(_fmt(row.get(c)) for c in columns))


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return "" if v is None else str(v)


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        raw = ex.load_config(args.config)
        if not isinstance(raw, dict):
            raise ex.ConfigError("config must be a JSON object")
        raw.update(_overrides(args))
        if args.command == "lemma1":
            kw = ex.lemma1_kwargs(raw)
            result = ex.lemma1_campaign(**kw)
            _print_rows(result.summary["results"], ("n", "trials", "mean", "se"))
            return EXIT_OK
        if args.command == "oracle":
            oracle = dict(raw.get("oracle", {}))
            for key in ("posterior_samples", "iterations", "step_scale"):
                val = getattr(args, key)
                if val is not None:
                    oracle[key] = val
            raw["oracle"] = oracle
        cfg = ex.config_from_dict(raw)
        campaign = {"simulate": ex.run_campaign, "ratio": ex.ratio_campaign,
                    "oracle": ex.oracle_campaign}[args.command]
        result = campaign(cfg)
    except ex.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    _print_rows(result.summary["results"],
                ("n", "estimator", "linf_mean", "linf_se", "normalized_linf_mean",
                 "localization_frequency", "typical_set_frequency"))
    if result.summary["ratios"]:
        print()
        _print_rows(result.summary["ratios"], ("n", "wiener", "ratio", "ratio_se"))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
