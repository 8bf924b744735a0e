"""Controlled experiment sweeps and their output files.

Each experiment is a list of configurations (a point on the x axis or a row
of a table). Every configuration is scored over the profile's seeds; a metric
that fails on a seed leaves a gap instead of a value.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dmetrics.core.config import settings
from dmetrics.models.enums import ExperimentName, Generator, MetricName, OutputFormat, Profile
from dmetrics.models.schemas.experiment import ExperimentSpec
from dmetrics.models.schemas.params import BinningSpec, MetricParams
from dmetrics.models.schemas.results import CurvePoint, ExperimentResult, MetricCurve, MetricFailure, ScoreRunResult
from dmetrics.services.discretize import bin_populations, discretize_codes
from dmetrics.services.metrics.registry import output_columns
from dmetrics.services.scoring import run_seeds
from dmetrics.services.storage import LocalResultStore
from dmetrics.services.svg import line_chart
from dmetrics.services.synthgen import gen_tangent, generate

logger = logging.getLogger(__name__)

NUM_FACTORS = 8
ALPHA_GRID = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
# The circulant at alpha and 1 - alpha differ only by a code permutation
ROTATION_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]
HIDDEN_GRID = [k / NUM_FACTORS for k in range(1, NUM_FACTORS + 1)]

FAMILIES: dict[str, list[MetricName]] = {
    "intervention": [MetricName.Z_DIFF, MetricName.Z_MIN, MetricName.Z_MAX, MetricName.IRS],
    "predictor": [MetricName.DCI_LASSO, MetricName.DCI_RF, MetricName.EXPLICITNESS_SCORE, MetricName.SAP],
    "information": [
        MetricName.MIG,
        MetricName.MIG_SUP,
        MetricName.JEMMIG,
        MetricName.MODULARITY_SCORE,
        MetricName.DCIMIG,
    ],
}


@dataclass(frozen=True)
class Configuration:
    label: str
    x: float
    spec: ExperimentSpec


def profile_size(profile: Profile) -> tuple[int, int]:
    """(samples, seeds) for a profile."""
    if profile == Profile.PAPER:
        return settings.PAPER_SAMPLES, settings.PAPER_SEEDS
    return settings.DESK_SAMPLES, settings.DESK_SEEDS


def configurations(
    name: ExperimentName, num_samples: int, seeds: list[int] | None = None
) -> tuple[str, list[Configuration]]:
    """(x-axis label, configurations) of one experiment, each generated over ``seeds``."""
    seeds = seeds or [settings.DEFAULT_SEED]

    def spec(generator: Generator, **kwargs) -> ExperimentSpec:
        return ExperimentSpec(
            generator=generator, num_factors=NUM_FACTORS, num_samples=num_samples, seeds=seeds, **kwargs
        )

    match name:
        case ExperimentName.NOISE:
            return "alpha", [Configuration(f"alpha={a:g}", a, spec(Generator.NOISE_MIX, alpha=a)) for a in ALPHA_GRID]
        case ExperimentName.ROTATION:
            return "alpha", [Configuration(f"alpha={a:g}", a, spec(Generator.ROTATION, alpha=a)) for a in ROTATION_GRID]
        case ExperimentName.TANGENT:
            return "alpha", [Configuration(f"alpha={a:g}", a, spec(Generator.TANGENT, alpha=a)) for a in ALPHA_GRID]
        case ExperimentName.HIDDEN:
            hidden = [
                Configuration(
                    f"{round(f * NUM_FACTORS)}/{NUM_FACTORS}", f, spec(Generator.HIDDEN_FACTORS, alpha=0.0, fraction=f)
                )
                for f in HIDDEN_GRID
            ]
            return "fraction of measured factors", hidden
        case ExperimentName.ANGLES:
            rows = [
                ("[cos,sin]", Generator.ANGLE_TRIG, 2),
                ("[theta,theta]", Generator.REDUNDANT, 2),
                ("[theta,theta,theta,theta]", Generator.REDUNDANT, 4),
            ]
            angle_specs = [
                (label, ExperimentSpec(generator=g, redundancy=k, num_samples=num_samples, seeds=seeds))
                for label, g, k in rows
            ]
            return "representation", [Configuration(label, float(k), s) for k, (label, s) in enumerate(angle_specs)]
    raise ValueError(f"Unknown experiment '{name}'")


def experiment_params(
    metrics: list[MetricName] | None = None, factor_bins: BinningSpec | None = None
) -> dict[MetricName, MetricParams]:
    """Default parameters, with the coarse factor binning Z-max needs at 8 factors."""
    selected = metrics or list(MetricName)
    base = MetricParams(factor_bins=factor_bins or BinningSpec())
    return {
        name: base.with_overrides({"intervention": {"zmax_num_bins": settings.ZMAX_BINS}})
        if name == MetricName.Z_MAX
        else base
        for name in MetricName
        if name in selected
    }


def _curves(runs: list[tuple[Configuration, ScoreRunResult]], metrics: list[MetricName]) -> list[MetricCurve]:
    curves = []
    for metric in MetricName:
        if metric not in metrics:
            continue
        for column, prop in output_columns([metric]):
            points = []
            for config, result in runs:
                agg = next((a for a in result.aggregates if a.metric_name == column), None)
                failed = sum(1 for f in result.failures if f.metric_name == metric.value)
                points.append(
                    CurvePoint(
                        x=config.x,
                        label=config.label,
                        mean=agg.mean if agg else None,
                        std=agg.std if agg else None,
                        n_seeds=agg.n_seeds if agg else 0,
                        n_failures=failed,
                    )
                )
            curves.append(MetricCurve(metric_name=column, property=prop, points=points))
    return curves


def run_experiment(
    name: ExperimentName,
    profile: Profile = Profile.DESK,
    seed: int | None = None,
    jobs: int = 1,
    metrics: list[MetricName] | None = None,
    num_samples: int | None = None,
    num_seeds: int | None = None,
) -> ExperimentResult:
    """Score every configuration of ``name`` over consecutive seeds starting at ``seed``."""
    default_samples, default_seeds = profile_size(profile)
    n = num_samples or default_samples
    start = settings.DEFAULT_SEED if seed is None else seed
    seeds = list(range(start, start + (num_seeds or default_seeds)))
    x_label, configs = configurations(name, n, seeds)
    params = experiment_params(metrics)

    logger.info(
        "Running experiment",
        extra={"experiment": name.value, "profile": profile.value, "samples": n, "seeds": len(seeds)},
    )
    runs: list[tuple[Configuration, ScoreRunResult]] = []
    failures: list[MetricFailure] = []
    for config in configs:
        config_params = experiment_params(metrics, config.spec.bins)
        result = run_seeds(
            lambda s, spec=config.spec: generate(spec, s),
            config_params,
            config.spec.seeds,
            jobs,
            record_wall_time=False,
        )
        runs.append((config, result))
        failures.extend(f.model_copy(update={"message": f"{config.label}: {f.message}"}) for f in result.failures)
        logger.info("Configuration done", extra={"configuration": config.label, "failures": len(result.failures)})

    return ExperimentResult(
        name=name,
        profile=profile,
        num_samples=n,
        seeds=seeds,
        x_label=x_label,
        curves=_curves(runs, list(params)),
        failures=failures,
        params={m.value: p.model_dump(mode="json") for m, p in params.items()},
    )


def summary_table(result: ExperimentResult) -> pd.DataFrame:
    """Configurations x metrics table of seed means (blank where every seed failed)."""
    if not result.curves:
        return pd.DataFrame()
    labels = [p.label for p in result.curves[0].points]
    data = {"configuration": labels, result.x_label: [p.x for p in result.curves[0].points]}
    for curve in result.curves:
        data[curve.metric_name] = [np.nan if p.mean is None else p.mean for p in curve.points]
    return pd.DataFrame(data)


def tangent_bin_populations(num_samples: int, seed: int, num_bins: int | None = None) -> pd.DataFrame:
    """Code bin populations (pooled over dimensions) at the two ends of the tangent sweep."""
    spec = BinningSpec.empirical(num_bins or settings.NUM_BINS)
    rows = []
    for alpha in (0.0, 1.0):
        _, codes = gen_tangent(NUM_FACTORS, num_samples, alpha, seed)
        binned = discretize_codes(codes, spec)
        counts = sum(bin_populations(binned[:, j], spec.num_bins) for j in range(codes.n_dims))
        total = int(counts.sum())
        rows.extend(
            {"alpha": alpha, "bin": b, "count": int(c), "fraction": c / total} for b, c in enumerate(counts)
        )
    return pd.DataFrame(rows)


def write_experiment(result: ExperimentResult, store: LocalResultStore, formats: list[OutputFormat]) -> list[str]:
    """Write curve CSVs, summary JSON and one chart per metric family; returns the written paths."""
    written = []
    if OutputFormat.CSV in formats:
        for curve in result.curves:
            frame = pd.DataFrame(
                {
                    "configuration": [p.label for p in curve.points],
                    "x": [p.x for p in curve.points],
                    "mean": [np.nan if p.mean is None else p.mean for p in curve.points],
                    "std": [np.nan if p.std is None else p.std for p in curve.points],
                    "n_seeds": [p.n_seeds for p in curve.points],
                    "n_failures": [p.n_failures for p in curve.points],
                }
            )
            written.append(str(store.write_csv(f"curves/{curve.metric_name}.csv", frame)))
        written.append(str(store.write_csv("summary.csv", summary_table(result))))
        if result.name == ExperimentName.TANGENT:
            populations = tangent_bin_populations(result.num_samples, result.seeds[0])
            written.append(str(store.write_csv("tangent_bin_populations.csv", populations)))
    if OutputFormat.JSON in formats:
        written.append(str(store.write_json("summary.json", result)))
    if OutputFormat.SVG in formats and result.name != ExperimentName.ANGLES:
        for family, members in FAMILIES.items():
            names = {c for m in members for c, _ in output_columns([m])}
            series = [
                (c.metric_name, [(p.x, p.mean, p.std) for p in c.points]) for c in result.curves if c.metric_name in names
            ]
            if not series:
                continue
            svg = line_chart(f"{result.name.value}: {family} metrics", result.x_label, "score", series)
            written.append(str(store.write_text(f"figures/{family}.svg", svg)))
    return written
