"""Cross-metric comparison: Kendall rank correlation and seed aggregation."""

import logging
import math

import numpy as np
import pandas as pd
from scipy import stats

from dmetrics.core.errors import AllTiedError, EmptyInputError, InsufficientDataError, MixedMetricError
from dmetrics.models.reports import MetricReport
from dmetrics.models.schemas.results import KendallMatrix, SeedAggregate

logger = logging.getLogger(__name__)


def kendall_tau(ranks_a, ranks_b) -> float:
    """Tie-corrected Kendall tau (tau-b) between two rankings of the same items."""
    a = np.asarray(ranks_a, dtype=np.float64).ravel()
    b = np.asarray(ranks_b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise InsufficientDataError(f"Rankings have different lengths ({a.shape[0]} vs {b.shape[0]})")
    if a.shape[0] < 2:
        raise InsufficientDataError("Kendall tau needs at least 2 ranked items")
    tau = stats.kendalltau(a, b, variant="b").statistic
    if not math.isfinite(tau):
        raise AllTiedError("Kendall tau is undefined when one ranking is entirely tied")
    return float(tau)


def correlation_matrix(table: pd.DataFrame) -> KendallMatrix:
    """
    Kendall tau (x100) between every pair of metric columns.

    ``table`` has one row per configuration and one column per metric.
    """
    metrics = [str(c) for c in table.columns]
    if len(metrics) < 2:
        raise InsufficientDataError("At least 2 metrics are needed for a comparison")
    if table.shape[0] < 2:
        raise InsufficientDataError("At least 2 configurations are needed for a comparison")

    k = len(metrics)
    values = np.full((k, k), 100.0)
    for a in range(k):
        for b in range(a + 1, k):
            try:
                tau = kendall_tau(table.iloc[:, a].to_numpy(), table.iloc[:, b].to_numpy())
            except AllTiedError as e:
                raise AllTiedError(f"Cannot compare '{metrics[a]}' and '{metrics[b]}': {e}") from e
            values[a, b] = values[b, a] = 100.0 * tau
    return KendallMatrix(metrics=metrics, values=values.tolist(), n_configurations=int(table.shape[0]))


def _mean_vector(rows: list[list[float] | None]) -> list[float] | None:
    if any(r is None for r in rows) or len({len(r) for r in rows}) != 1:  # type: ignore[arg-type]
        return None
    return np.mean(np.asarray(rows, dtype=np.float64), axis=0).tolist()


def aggregate_seeds(reports: list[MetricReport]) -> SeedAggregate:
    """Mean and sample standard deviation (n - 1) of one metric over seeds; std is 0 for a single seed."""
    if not reports:
        raise EmptyInputError("Nothing to aggregate")
    names = {r.metric_name for r in reports}
    if len(names) > 1:
        raise MixedMetricError(f"Cannot aggregate different metrics together: {sorted(names)}")

    values = np.array([r.overall for r in reports], dtype=np.float64)
    std = float(np.std(values, ddof=1)) if values.shape[0] > 1 else 0.0
    return SeedAggregate(
        metric_name=reports[0].metric_name,
        property=reports[0].property,
        mean=float(np.clip(values.mean(), values.min(), values.max())),
        std=std,
        n_seeds=int(values.shape[0]),
        minimum=float(values.min()),
        maximum=float(values.max()),
        per_factor_mean=_mean_vector([r.per_factor for r in reports]),
        per_code_mean=_mean_vector([r.per_code for r in reports]),
    )
