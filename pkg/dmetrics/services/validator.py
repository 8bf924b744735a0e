"""Input validation utilities (module-level functions, no unnecessary classes)"""

import logging

import numpy as np

from dmetrics.core.errors import DimensionMismatchError, InvalidChanceError, NonFiniteDataError
from dmetrics.models.data import CodeMatrix, FactorMatrix

logger = logging.getLogger(__name__)


def ensure_finite(values: np.ndarray, what: str) -> None:
    """Raise NonFiniteDataError naming the first NaN/inf cell (row-major order)."""
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = (int(i) for i in np.argwhere(bad)[0])
        raise NonFiniteDataError(what, row, col)


def validate_pair(factors: FactorMatrix, codes: CodeMatrix) -> tuple[FactorMatrix, CodeMatrix]:
    """
    Check that factors and codes describe the same samples.

    Returns the pair unchanged.

    Raises:
        DimensionMismatchError: if the row counts differ
        NonFiniteDataError: on the first NaN or infinite entry
    """
    if factors.n_samples != codes.n_samples:
        raise DimensionMismatchError(factors.n_samples, codes.n_samples)

    ensure_finite(factors.values, "factors")
    ensure_finite(codes.values, "codes")

    return factors, codes


def rescale_by_chance(raw: float, chance: float) -> float:
    """Map an accuracy from [chance, 1] onto [0, 1], clamping below-chance results to 0."""
    if not 0.0 <= chance < 1.0:
        raise InvalidChanceError(f"Chance level must lie in [0, 1), got {chance}")

    return float(np.clip((raw - chance) / (1.0 - chance), 0.0, 1.0))
