"""Plug-in (maximum-likelihood) entropy and mutual information over binned variables.

Everything is in nats. Reported scores are ratios or are normalized by an
entropy bound, so the log base cancels.
"""

import logging
from dataclasses import dataclass

import numpy as np

from dmetrics.core.errors import EmptyHistogramError
from dmetrics.models.data import CodeMatrix, FactorMatrix, ImportanceMatrix, JointHistogram
from dmetrics.models.enums import ImportanceSource
from dmetrics.models.schemas.params import BinningSpec
from dmetrics.services.discretize import discretize_codes, discretize_factors
from dmetrics.services.validator import validate_pair

logger = logging.getLogger(__name__)


def entropy(pop: np.ndarray) -> float:
    """-sum p log p of a bin-count vector, with 0 log 0 = 0."""
    pop = np.asarray(pop, dtype=np.float64).ravel()
    total = pop.sum()
    if total <= 0:
        raise EmptyHistogramError("Entropy of an empty histogram is undefined")
    p = pop[pop > 0] / total
    return float(max(-np.sum(p * np.log(p)), 0.0))


def mutual_information(hist: JointHistogram) -> float:
    counts = hist.counts.astype(np.float64)
    total = counts.sum()
    if total <= 0:
        raise EmptyHistogramError("Mutual information of an empty histogram is undefined")
    p_joint = counts / total
    p_row = p_joint.sum(axis=1, keepdims=True)
    p_col = p_joint.sum(axis=0, keepdims=True)
    nz = p_joint > 0
    outer = (p_row @ p_col)[nz]
    mi = np.sum(p_joint[nz] * np.log(p_joint[nz] / outer))
    # clamp rounding noise
    return float(max(mi, 0.0))


def joint_entropy(hist: JointHistogram) -> float:
    return entropy(hist.counts)


@dataclass(frozen=True)
class InformationTables:
    """Estimates shared by every information-based metric of one run."""

    mi: np.ndarray  # M x d
    joint_entropies: np.ndarray  # M x d, H(v_i, z_j)
    factor_entropies: np.ndarray  # M
    code_entropies: np.ndarray  # d
    num_code_bins: int

    @property
    def importance(self) -> ImportanceMatrix:
        return ImportanceMatrix(weights=self.mi, source=ImportanceSource.MUTUAL_INFORMATION)


def information_tables(
    factors: FactorMatrix,
    codes: CodeMatrix,
    factor_bins: BinningSpec,
    code_bins: BinningSpec | None = None,
) -> InformationTables:
    validate_pair(factors, codes)
    code_bins = code_bins or factor_bins

    v_idx, v_sizes = discretize_factors(factors, factor_bins)
    z_idx = discretize_codes(codes, code_bins)
    m, d = factors.n_factors, codes.n_dims
    b_z = code_bins.num_bins

    mi = np.zeros((m, d))
    joint = np.zeros((m, d))
    for i in range(m):
        for j in range(d):
            hist = JointHistogram.from_indices(v_idx[:, i], z_idx[:, j], v_sizes[i], b_z)
            mi[i, j] = mutual_information(hist)
            joint[i, j] = joint_entropy(hist)

    factor_h = np.array([entropy(np.bincount(v_idx[:, i], minlength=v_sizes[i])) for i in range(m)])
    code_h = np.array([entropy(np.bincount(z_idx[:, j], minlength=b_z)) for j in range(d)])

    logger.debug("Computed %dx%d mutual information table", m, d)
    return InformationTables(
        mi=mi, joint_entropies=joint, factor_entropies=factor_h, code_entropies=code_h, num_code_bins=b_z
    )


def pairwise_mi_matrix(
    factors: FactorMatrix, codes: CodeMatrix, spec: BinningSpec, code_spec: BinningSpec | None = None
) -> ImportanceMatrix:
    """M x d matrix of I(v_i, z_j) over the binned pair."""
    return information_tables(factors, codes, spec, code_spec).importance
