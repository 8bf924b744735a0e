"""Metric hyper-parameters.

Every value here is written verbatim into the reports so a score can always be
traced back to the settings that produced it.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from dmetrics.core.config import settings
from dmetrics.models.enums import BinningStrategy, IrsDistance


class BinningSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_bins: int = Field(default_factory=lambda: settings.NUM_BINS)
    strategy: BinningStrategy = BinningStrategy.EQUAL_WIDTH_EMPIRICAL
    lo: float | None = None
    hi: float | None = None

    @field_validator("num_bins")
    @classmethod
    def at_least_two(cls, v: int) -> int:
        if v < 2:
            raise ValueError("num_bins must be at least 2 for equal-width binning")
        return v

    @model_validator(mode="after")
    def check_bounds(self) -> "BinningSpec":
        if self.strategy == BinningStrategy.EQUAL_WIDTH_FIXED:
            if self.lo is None or self.hi is None:
                raise ValueError("equal-width-fixed binning needs lo and hi")
            if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.hi > self.lo):
                raise ValueError(f"Invalid fixed bounds [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def fixed(cls, lo: float, hi: float, num_bins: int | None = None) -> "BinningSpec":
        return cls(
            num_bins=num_bins or settings.NUM_BINS, strategy=BinningStrategy.EQUAL_WIDTH_FIXED, lo=lo, hi=hi
        )

    @classmethod
    def empirical(cls, num_bins: int | None = None) -> "BinningSpec":
        return cls(num_bins=num_bins or settings.NUM_BINS)


class InterventionParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_batches: PositiveInt = 5000
    pairs_per_batch: PositiveInt = 64
    samples_per_subset: PositiveInt = 64
    num_train_points: PositiveInt = 4000
    # Factor bins for Z-max; None reuses the factor binning
    zmax_num_bins: int | None = None
    irs_distance: IrsDistance = IrsDistance.PER_DIMENSION
    irs_quantile: float = Field(default=0.99, gt=0.0, le=1.0)
    classifier_epochs: PositiveInt = 300
    classifier_l2: float = Field(default=1e-4, ge=0.0)

    @model_validator(mode="after")
    def check_split(self) -> "InterventionParams":
        if self.num_train_points >= self.num_batches:
            raise ValueError("num_train_points must leave at least one evaluation batch")
        if self.zmax_num_bins is not None and self.zmax_num_bins < 2:
            raise ValueError("zmax_num_bins must be at least 2")
        return self


class DciParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    test_fraction: float = Field(default=0.3, gt=0.0, lt=1.0)
    cv_folds: int = Field(default=3, ge=2)
    # CV runs on at most this many training rows
    cv_max_samples: PositiveInt = 1000
    # Cross-validated when it holds more than one penalty
    lasso_grid: list[float] = Field(default_factory=lambda: [1e-4])
    lasso_tol: float = Field(default=1e-6, gt=0.0)
    lasso_max_sweeps: PositiveInt = 1000
    forest_depths: list[int | None] = Field(default_factory=lambda: [2, 4, 8, None])
    num_trees: PositiveInt = 10
    min_leaf: PositiveInt = 5
    # None means ceil(sqrt(d))
    features_per_split: PositiveInt | None = None

    @field_validator("lasso_grid")
    @classmethod
    def nonnegative_grid(cls, v: list[float]) -> list[float]:
        if not v or any(lam < 0 for lam in v):
            raise ValueError("lasso_grid must be a non-empty list of nonnegative values")
        return v

    @field_validator("forest_depths")
    @classmethod
    def positive_depths(cls, v: list[int | None]) -> list[int | None]:
        if not v or any(depth is not None and depth < 1 for depth in v):
            raise ValueError("forest_depths must be a non-empty list of positive depths (or null)")
        return v


class SapParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dead_code_threshold: float = Field(default=1e-6, ge=0.0)
    tree_depths: list[int] = Field(default_factory=lambda: [2, 4, 8])
    cv_folds: int = Field(default=3, ge=2)
    test_fraction: float = Field(default=0.3, gt=0.0, lt=1.0)
    min_leaf: PositiveInt = 1


class ExplicitnessParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    l2: float = Field(default=1e-4, ge=0.0)
    epochs: PositiveInt = 300
    balanced: bool = True
    # One softmax model instead of one logistic model per class
    multinomial: bool = False
    # 0 evaluates ROCAUC on the training rows
    test_fraction: float = Field(default=0.3, ge=0.0, lt=1.0)


class MetricParams(BaseModel):
    """Everything a metric may read. Overrides are merged onto this and re-validated."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    factor_bins: BinningSpec = Field(default_factory=BinningSpec)
    code_bins: BinningSpec = Field(default_factory=BinningSpec)
    intervention: InterventionParams = Field(default_factory=InterventionParams)
    dci: DciParams = Field(default_factory=DciParams)
    sap: SapParams = Field(default_factory=SapParams)
    explicitness: ExplicitnessParams = Field(default_factory=ExplicitnessParams)
    seed: int = 0

    def with_overrides(self, overrides: dict) -> "MetricParams":
        """Deep-merge a (possibly nested) override dict and validate the result."""
        merged = _deep_merge(self.model_dump(mode="json"), overrides)
        return MetricParams.model_validate(merged)


def _deep_merge(base: dict, extra: dict) -> dict:
    out = dict(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out
