"""Metrics computed from the factor/code mutual information table.

All of them read a precomputed table so that every score of a run sees the
same estimates. Argmax ties resolve to the lowest index, which makes the gap
of tied entries exactly 0.
"""

import logging
import math

import numpy as np

from dmetrics.core.errors import ShapeMismatchError, ZeroEntropyError
from dmetrics.models.data import ImportanceMatrix
from dmetrics.models.enums import MetricName, Property
from dmetrics.models.reports import MetricReport

logger = logging.getLogger(__name__)


def top_two(values: np.ndarray) -> tuple[int, float, float]:
    """(argmax, largest, second largest over distinct positions); second is 0 for a single value."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(-values, kind="stable")
    first = float(values[order[0]])
    second = float(values[order[1]]) if values.shape[0] > 1 else 0.0
    return int(order[0]), first, second


def _table(mi: ImportanceMatrix | np.ndarray) -> np.ndarray:
    return mi.weights if isinstance(mi, ImportanceMatrix) else np.asarray(mi, dtype=np.float64)


def _entropies(factor_entropies: np.ndarray, m: int) -> np.ndarray:
    h = np.asarray(factor_entropies, dtype=np.float64).ravel()
    if h.shape[0] != m:
        raise ShapeMismatchError(f"Expected {m} factor entropies, got {h.shape[0]}")
    return h


def mig(mi: ImportanceMatrix | np.ndarray, factor_entropies: np.ndarray, seed: int = 0) -> MetricReport:
    """Gap between the two most informative codes, normalized by the factor's total MI."""
    table = _table(mi)
    h = _entropies(factor_entropies, table.shape[0])
    flags: list[str] = []
    per_factor: list[float] = []
    for i, row in enumerate(table):
        total = float(row.sum())
        if h[i] == 0:
            flags.append(f"factor {i} is constant")
        if total <= 0:
            flags.append(f"factor {i} shares no information with any code")
            per_factor.append(0.0)
            continue
        _, first, second = top_two(row)
        per_factor.append((first - second) / total)

    for flag in flags:
        logger.warning("MIG: %s", flag)
    return MetricReport(
        metric_name=MetricName.MIG.value,
        property=Property.COMPACTNESS,
        overall=float(np.mean(per_factor)),
        per_factor=per_factor,
        aggregate="factor",
        seed=seed,
        flags=flags,
    )


def jemmig(
    mi: ImportanceMatrix | np.ndarray,
    joint_entropies: np.ndarray,
    factor_entropies: np.ndarray,
    num_code_bins: int,
    seed: int = 0,
) -> MetricReport:
    """Normalized JEMMIG: 1 - (H(v,z*) - I(v,z*) + I(v,z°)) / (H(v) + log B_z)."""
    table = _table(mi)
    joint = np.asarray(joint_entropies, dtype=np.float64)
    if joint.shape != table.shape:
        raise ShapeMismatchError(f"Joint entropy table {joint.shape} does not match MI table {table.shape}")
    h = _entropies(factor_entropies, table.shape[0])
    bound = math.log(num_code_bins)

    flags: list[str] = []
    per_factor: list[float] = []
    for i, row in enumerate(table):
        if row.sum() <= 0:
            flags.append(f"factor {i} shares no information with any code")
        best, first, second = top_two(row)
        raw = joint[i, best] - first + second
        per_factor.append(float(np.clip(1.0 - raw / (h[i] + bound), 0.0, 1.0)))

    for flag in flags:
        logger.warning("JEMMIG: %s", flag)
    return MetricReport(
        metric_name=MetricName.JEMMIG.value,
        property=Property.HOLISTIC,
        overall=float(np.mean(per_factor)),
        per_factor=per_factor,
        aggregate="factor",
        seed=seed,
        flags=flags,
        params={"num_code_bins": num_code_bins},
    )


def mig_sup(mi: ImportanceMatrix | np.ndarray, factor_entropies: np.ndarray, seed: int = 0) -> MetricReport:
    """Gap computed per code over entropy-normalized MI, averaged over codes."""
    table = _table(mi)
    h = _entropies(factor_entropies, table.shape[0])
    normalized = np.divide(table, h[:, None], out=np.zeros_like(table), where=h[:, None] > 0)

    flags: list[str] = []
    per_code: list[float] = []
    for j in range(table.shape[1]):
        col = normalized[:, j]
        if col.max() <= 0:
            flags.append(f"code {j} carries no information about any measured factor")
            per_code.append(0.0)
            continue
        _, first, second = top_two(col)
        per_code.append(first - second)

    for flag in flags:
        logger.warning("MIG-sup: %s", flag)
    return MetricReport(
        metric_name=MetricName.MIG_SUP.value,
        property=Property.MODULARITY,
        overall=float(np.mean(per_code)),
        per_code=per_code,
        aggregate="code",
        seed=seed,
        flags=flags,
    )


def modularity_score(mi: ImportanceMatrix | np.ndarray, seed: int = 0) -> MetricReport:
    table = _table(mi)
    m = table.shape[0]
    flags: list[str] = []
    per_code: list[float] = []
    for j in range(table.shape[1]):
        col = table[:, j]
        best, theta, _ = top_two(col)
        if theta <= 0:
            flags.append(f"code {j} has zero information with every factor")
            per_code.append(0.0)
            continue
        if m == 1:
            per_code.append(1.0)
            continue
        others = np.delete(col, best)
        per_code.append(float(1.0 - np.sum(others**2) / (theta**2 * (m - 1))))

    for flag in flags:
        logger.warning("Modularity score: %s", flag)
    return MetricReport(
        metric_name=MetricName.MODULARITY_SCORE.value,
        property=Property.MODULARITY,
        overall=float(np.mean(per_code)),
        per_code=per_code,
        aggregate="code",
        seed=seed,
        flags=flags,
    )


def dcimig(mi: ImportanceMatrix | np.ndarray, factor_entropies: np.ndarray, seed: int = 0) -> MetricReport:
    """
    Each code's gap is credited to its most informative factor; a factor keeps
    its best credited gap. Score = sum of kept gaps / total factor entropy.
    """
    table = _table(mi)
    h = _entropies(factor_entropies, table.shape[0])
    if h.sum() <= 0:
        raise ZeroEntropyError("DCIMIG is undefined when every factor is constant")

    kept = np.zeros(table.shape[0])
    owner: list[int] = []
    for j in range(table.shape[1]):
        best, first, second = top_two(table[:, j])
        owner.append(best)
        kept[best] = max(kept[best], first - second)

    per_factor = np.divide(kept, h, out=np.zeros_like(kept), where=h > 0).tolist()
    weights = h.tolist()
    return MetricReport(
        metric_name=MetricName.DCIMIG.value,
        property=Property.HOLISTIC,
        overall=float(np.average(per_factor, weights=weights)),
        per_factor=per_factor,
        weights=weights,
        aggregate="factor",
        seed=seed,
        details={"gap_owner": owner},
    )
