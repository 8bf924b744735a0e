"""In-memory data model shared by every metric.

Arrays are copied on construction and marked read-only, so instances can be
shared between threads. Finiteness is checked by ``validate_pair`` (it reports
the offending cell), not at construction.
"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, computed_field, field_validator, model_validator

from dmetrics.models.enums import FactorKind, ImportanceSource


def _frozen_array(value: Any, ndim: int, dtype: type = np.float64) -> np.ndarray:
    arr = np.array(value, dtype=dtype, copy=True)
    if arr.ndim == 1 and ndim == 2:
        arr = arr.reshape(-1, 1)
    if arr.ndim != ndim:
        raise ValueError(f"Expected a {ndim}-D array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


class FactorMatrix(BaseModel):
    """N x M realizations of the ground-truth factors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    factor_names: list[str]
    kinds: list[FactorKind]
    # Known support per factor; None means "use the empirical range"
    bounds: list[tuple[float, float] | None]

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        values = _frozen_array(data.get("values"), ndim=2)
        data["values"] = values
        m = values.shape[1]
        if data.get("factor_names") is None:
            data["factor_names"] = [f"v{i}" for i in range(m)]
        if data.get("kinds") is None:
            data["kinds"] = [FactorKind.CONTINUOUS] * m
        if data.get("bounds") is None:
            data["bounds"] = [None] * m
        return data

    @model_validator(mode="after")
    def check_shape(self) -> "FactorMatrix":
        n, m = self.values.shape
        if n < 1 or m < 1:
            raise ValueError(f"Factor matrix needs at least one row and one column, got {n}x{m}")
        if not (len(self.factor_names) == len(self.kinds) == len(self.bounds) == m):
            raise ValueError(f"Factor metadata must describe exactly {m} columns")
        for j, kind in enumerate(self.kinds):
            if kind != FactorKind.CATEGORICAL:
                continue
            col = self.values[:, j]
            col = col[np.isfinite(col)]
            if np.any(col < 0) or np.any(col != np.round(col)):
                raise ValueError(f"Categorical factor '{self.factor_names[j]}' must hold nonnegative integer classes")
        for j, bound in enumerate(self.bounds):
            if bound is not None and not bound[1] > bound[0]:
                raise ValueError(f"Invalid bounds {bound} for factor '{self.factor_names[j]}'")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_factors(self) -> int:
        return int(self.values.shape[1])

    def column(self, i: int) -> np.ndarray:
        return self.values[:, i]

    def select(self, columns: list[int]) -> "FactorMatrix":
        """Return a new matrix holding only ``columns``, metadata included."""
        return FactorMatrix(
            values=self.values[:, columns],
            factor_names=[self.factor_names[i] for i in columns],
            kinds=[self.kinds[i] for i in columns],
            bounds=[self.bounds[i] for i in columns],
        )


class CodeMatrix(BaseModel):
    """N x d learned (or synthetic) codes."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    dim_names: list[str]

    @model_validator(mode="before")
    @classmethod
    def fill_defaults(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        values = _frozen_array(data.get("values"), ndim=2)
        data["values"] = values
        if data.get("dim_names") is None:
            data["dim_names"] = [f"z{j}" for j in range(values.shape[1])]
        return data

    @model_validator(mode="after")
    def check_shape(self) -> "CodeMatrix":
        n, d = self.values.shape
        if n < 1 or d < 1:
            raise ValueError(f"Code matrix needs at least one row and one column, got {n}x{d}")
        if len(self.dim_names) != d:
            raise ValueError(f"Expected {d} code dimension names, got {len(self.dim_names)}")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.values.shape[0])

    @property
    def n_dims(self) -> int:
        return int(self.values.shape[1])


class ImportanceMatrix(BaseModel):
    """M x d nonnegative factor-code relevance weights."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    source: ImportanceSource

    @field_validator("weights", mode="before")
    @classmethod
    def coerce_weights(cls, v: Any) -> np.ndarray:
        arr = _frozen_array(v, ndim=2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("Importance weights must be finite")
        if np.any(arr < 0):
            raise ValueError("Importance weights must be nonnegative")
        return arr

    @property
    def shape(self) -> tuple[int, int]:
        return int(self.weights.shape[0]), int(self.weights.shape[1])


class JointHistogram(BaseModel):
    """Contingency table of two discretized variables (rows x columns)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    counts: np.ndarray

    @field_validator("counts", mode="before")
    @classmethod
    def coerce_counts(cls, v: Any) -> np.ndarray:
        arr = _frozen_array(v, ndim=2, dtype=np.int64)
        if np.any(arr < 0):
            raise ValueError("Histogram counts must be nonnegative")
        return arr

    @computed_field  # type: ignore[prop-decorator]
    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_indices(cls, a: np.ndarray, b: np.ndarray, rows: int, cols: int) -> "JointHistogram":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        flat = np.bincount(a * cols + b, minlength=rows * cols)
        return cls(counts=flat.reshape(rows, cols))
