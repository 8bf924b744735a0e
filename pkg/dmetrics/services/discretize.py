"""Equal-width binning of factors and codes."""

import logging

import numpy as np

from dmetrics.core.errors import BinIndexError, EmptyInputError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import BinningStrategy, FactorKind
from dmetrics.models.schemas.params import BinningSpec

logger = logging.getLogger(__name__)


def discretize_column(x: np.ndarray, spec: BinningSpec) -> np.ndarray:
    """
    Assign each value to one of ``spec.num_bins`` equal-width bins.

    Values at or above the upper bound go to the last bin, values below the
    lower bound to the first. A constant column maps entirely to bin 0.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise EmptyInputError("Cannot discretize an empty column")

    if spec.strategy == BinningStrategy.EQUAL_WIDTH_FIXED:
        lo, hi = float(spec.lo), float(spec.hi)  # type: ignore[arg-type]
    else:
        lo, hi = float(x.min()), float(x.max())

    if hi <= lo:
        return np.zeros(x.shape[0], dtype=np.int64)

    idx = np.floor((x - lo) / (hi - lo) * spec.num_bins).astype(np.int64)
    return np.clip(idx, 0, spec.num_bins - 1)


def bin_populations(indices: np.ndarray, num_bins: int) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size and (indices.min() < 0 or indices.max() >= num_bins):
        raise BinIndexError(f"Bin indices must lie in [0, {num_bins}), got range [{indices.min()}, {indices.max()}]")
    return np.bincount(indices, minlength=num_bins)


def factor_spec(factors: FactorMatrix, i: int, spec: BinningSpec) -> BinningSpec:
    """Binning actually used for factor ``i``: its known support when empirical binning was requested."""
    bound = factors.bounds[i]
    if spec.strategy == BinningStrategy.EQUAL_WIDTH_EMPIRICAL and bound is not None:
        return BinningSpec.fixed(bound[0], bound[1], spec.num_bins)
    return spec


def discretize_factors(factors: FactorMatrix, spec: BinningSpec) -> tuple[np.ndarray, list[int]]:
    """
    Bin every factor column.

    Categorical factors keep their class index as bin index.

    Returns:
        (N x M int matrix, number of bins per factor)
    """
    out = np.empty(factors.values.shape, dtype=np.int64)
    sizes: list[int] = []
    for i, kind in enumerate(factors.kinds):
        col = factors.column(i)
        if kind == FactorKind.CATEGORICAL:
            out[:, i] = col.astype(np.int64)
            sizes.append(int(out[:, i].max()) + 1)
        else:
            out[:, i] = discretize_column(col, factor_spec(factors, i, spec))
            sizes.append(spec.num_bins)
    return out, sizes


def discretize_codes(codes: CodeMatrix, spec: BinningSpec) -> np.ndarray:
    """Bin every code dimension (N x d int matrix)."""
    return np.column_stack([discretize_column(codes.values[:, j], spec) for j in range(codes.n_dims)])
