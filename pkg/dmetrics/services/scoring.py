"""Seed x metric orchestration.

Seeds run concurrently; each (seed, metric) pair draws its randomness from a
seed derived from both, so the result does not depend on scheduling. Results
are collected and ordered by a single caller.
"""

import logging
import time
import zlib
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed

import numpy as np

from dmetrics.core.config import settings
from dmetrics.core.errors import ConfigError, MetricsError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import MetricName
from dmetrics.models.reports import MetricReport
from dmetrics.models.schemas.params import MetricParams
from dmetrics.models.schemas.results import MetricFailure, ScoreRunResult
from dmetrics.models.schemas.run_config import RunConfig
from dmetrics.services.analysis import aggregate_seeds
from dmetrics.services.infotheory import InformationTables, information_tables
from dmetrics.services.metrics.registry import INFORMATION_METRICS, MetricContext, output_columns, resolve
from dmetrics.services.synthgen import generate
from dmetrics.services.validator import validate_pair

logger = logging.getLogger(__name__)

DataSource = Callable[[int], tuple[FactorMatrix, CodeMatrix]]


def metric_seed(seed: int, name: MetricName | str) -> int:
    """Seed for one metric evaluation, derived from the run seed and the metric name."""
    tag = zlib.crc32(str(MetricName(name).value).encode())
    return int(np.random.SeedSequence([seed, tag]).generate_state(1)[0])


def resolve_params(config: RunConfig) -> dict[MetricName, MetricParams]:
    """Shared overrides first, then each metric's own. A generated run bins factors as its experiment says."""
    start = MetricParams(factor_bins=config.experiment.bins) if config.experiment is not None else MetricParams()
    base = start.with_overrides(config.params)
    return {sel.name: base.with_overrides(sel.overrides) for sel in config.metrics}


def evaluate_seed(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: dict[MetricName, MetricParams],
    seed: int,
) -> tuple[list[MetricReport], list[MetricFailure]]:
    """Run every selected metric on one factor/code pair."""
    validate_pair(factors, codes)
    reports: list[MetricReport] = []
    failures: list[MetricFailure] = []
    # One MI table per binning so every information metric reads the same estimates
    tables: dict[tuple, InformationTables | MetricsError] = {}

    for name, metric_params in params.items():
        derived = metric_seed(seed, name)
        try:
            cached = None
            if name in INFORMATION_METRICS:
                key = (metric_params.factor_bins, metric_params.code_bins)
                if key not in tables:
                    try:
                        tables[key] = information_tables(factors, codes, *key)
                    except MetricsError as e:
                        tables[key] = e
                if isinstance(tables[key], MetricsError):
                    raise tables[key]
                cached = tables[key]
            ctx = MetricContext(factors, codes, metric_params, derived, cached)  # type: ignore[arg-type]
            for report in resolve(name)(ctx):
                reports.append(
                    report.model_copy(update={"seed": seed, "params": {**report.params, "derived_seed": derived}})
                )
        except MetricsError as e:
            logger.warning(
                "Metric failed",
                extra={"metric": name.value, "seed": seed, "error_type": type(e).__name__, "error": str(e)},
            )
            failures.append(MetricFailure(metric_name=name.value, seed=seed, error_type=type(e).__name__, message=str(e)))
    return reports, failures


def run_seeds(
    source: DataSource,
    params: dict[MetricName, MetricParams],
    seeds: list[int],
    jobs: int = 1,
    record_wall_time: bool | None = None,
) -> ScoreRunResult:
    """Evaluate ``params``' metrics on ``source(seed)`` for every seed and aggregate."""
    started = time.perf_counter()
    outcomes: dict[int, tuple[list[MetricReport], list[MetricFailure]]] = {}

    def work(seed: int) -> tuple[list[MetricReport], list[MetricFailure]]:
        factors, codes = source(seed)
        return evaluate_seed(factors, codes, params, seed)

    if jobs <= 1 or len(seeds) == 1:
        for seed in seeds:
            outcomes[seed] = work(seed)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            future_to_seed = {executor.submit(work, seed): seed for seed in seeds}
            for future in as_completed(future_to_seed):
                outcomes[future_to_seed[future]] = future.result()

    order = {name: k for k, (name, _) in enumerate(output_columns(list(params)))}
    reports = [r for seed in seeds for r in outcomes[seed][0]]
    reports.sort(key=lambda r: order.get(r.metric_name, len(order)))
    failures = [f for seed in seeds for f in outcomes[seed][1]]

    grouped: dict[str, list[MetricReport]] = {}
    for report in reports:
        grouped.setdefault(report.metric_name, []).append(report)
    aggregates = [aggregate_seeds(group) for group in grouped.values()]

    record = settings.RECORD_WALL_TIME if record_wall_time is None else record_wall_time
    elapsed = time.perf_counter() - started
    logger.info(
        "Scored seeds",
        extra={"seeds": len(seeds), "metrics": len(params), "failures": len(failures), "seconds": round(elapsed, 3)},
    )
    return ScoreRunResult(
        aggregates=aggregates,
        reports=reports,
        failures=failures,
        seeds=list(seeds),
        params={name.value: p.model_dump(mode="json") for name, p in params.items()},
        wall_time_seconds=elapsed if record else None,
    )


def score_pair(
    factors: FactorMatrix,
    codes: CodeMatrix,
    config: RunConfig,
    record_wall_time: bool | None = None,
) -> ScoreRunResult:
    """Score a fixed factor/code pair with the metrics and seeds of ``config``."""
    validate_pair(factors, codes)
    return run_seeds(lambda _seed: (factors, codes), resolve_params(config), config.seeds, config.jobs, record_wall_time)


def score_experiment(config: RunConfig, record_wall_time: bool | None = None) -> ScoreRunResult:
    """Score the pair ``config.experiment`` generates for each of its seeds."""
    spec = config.experiment
    if spec is None:
        raise ConfigError("The run configuration has no experiment to generate")
    logger.info(
        "Scoring generated data",
        extra={"generator": spec.generator.value, "samples": spec.num_samples, "seeds": len(spec.seeds)},
    )
    return run_seeds(lambda seed: generate(spec, seed), resolve_params(config), spec.seeds, config.jobs, record_wall_time)
