import argparse
import logging
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from dmetrics.cli.options import output_dir, parse_metrics
from dmetrics.core.errors import ConfigError
from dmetrics.models.enums import OutputFormat
from dmetrics.models.schemas.results import ScoreRunResult
from dmetrics.models.schemas.run_config import MetricSelection, RunConfig
from dmetrics.services.scoring import score_experiment, score_pair
from dmetrics.services.storage import LocalResultStore, load_codes, load_factors

logger = logging.getLogger(__name__)


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser("score", parents=parents, help="Score a representation stored as CSV files")
    parser.add_argument("--factors", type=Path, default=None, help="Headered CSV of ground-truth factors")
    parser.add_argument("--codes", type=Path, default=None, help="Headered CSV of code dimensions")
    parser.add_argument("--kinds", type=Path, default=None, help="JSON sidecar declaring factor kinds and bounds")
    parser.add_argument("--config", type=Path, default=None, help="RunConfig JSON document")
    parser.add_argument("--metrics", type=parse_metrics, default=None, help="Comma list restricting the metrics")
    parser.set_defaults(handler=handle)


def load_config(path: Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        return RunConfig.model_validate_json(path.read_text())
    except FileNotFoundError as e:
        raise ConfigError(f"Config file not found: {path}") from e
    except ValidationError as e:
        raise ConfigError(f"Invalid config {path}: {e}") from e


def apply_arguments(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Command-line flags win over the config document."""
    update: dict = {}
    if args.seed is not None:
        if config.experiment is not None:
            update["experiment"] = config.experiment.model_copy(update={"seeds": [args.seed]})
        else:
            update["seeds"] = [args.seed]
    if args.jobs is not None:
        update["jobs"] = max(1, args.jobs)
    if args.formats is not None:
        update["formats"] = args.formats
    if args.metrics is not None:
        chosen = {sel.name: sel for sel in config.metrics}
        update["metrics"] = [chosen.get(name, MetricSelection(name=name)) for name in dict.fromkeys(args.metrics)]
    return config.model_copy(update=update)


def scores_table(result: ScoreRunResult) -> pd.DataFrame:
    rows = [
        {
            "metric": a.metric_name,
            "property": a.property.value,
            "mean": a.mean,
            "std": a.std,
            "n_seeds": a.n_seeds,
            "min": a.minimum,
            "max": a.maximum,
        }
        for a in result.aggregates
    ]
    return pd.DataFrame(rows, columns=["metric", "property", "mean", "std", "n_seeds", "min", "max"])


def data_paths(config: RunConfig, args: argparse.Namespace) -> tuple[Path, Path, Path | None] | None:
    """Factor, code and kinds paths to score, or None when the config generates its data."""
    factors = args.factors or (Path(config.factors) if config.factors else None)
    codes = args.codes or (Path(config.codes) if config.codes else None)
    kinds = args.kinds or (Path(config.kinds) if config.kinds else None)
    if config.experiment is not None:
        if factors or codes or kinds:
            raise ConfigError("Give either an experiment or --factors/--codes, not both")
        return None
    if factors is None and codes is None:
        raise ConfigError("Nothing to score: pass --factors and --codes or a config with an experiment")
    if factors is None or codes is None:
        raise ConfigError("Both --factors and --codes are required")
    return factors, codes, kinds


def handle(args: argparse.Namespace) -> int:
    config = apply_arguments(load_config(args.config), args)
    paths = data_paths(config, args)
    if paths is None:
        result = score_experiment(config)
    else:
        factors = load_factors(paths[0], paths[2])
        codes = load_codes(paths[1])
        logger.info(
            "Scoring representation",
            extra={"samples": factors.n_samples, "factors": factors.n_factors, "codes": codes.n_dims},
        )
        result = score_pair(factors, codes, config)

    store = LocalResultStore(args.out or config.output_dir or output_dir(args))
    if OutputFormat.CSV in config.formats:
        store.write_csv("scores.csv", scores_table(result))
    if OutputFormat.JSON in config.formats:
        store.write_json("report.json", result)
    if OutputFormat.SVG in config.formats:
        logger.info("The score command writes no charts; svg ignored")

    for failure in result.failures:
        logger.error(
            "Metric failed",
            extra={"metric": failure.metric_name, "seed": failure.seed, "error": failure.message},
        )
    return 0 if result.ok else 2
