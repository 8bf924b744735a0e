import math
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dmetrics.models.data import ImportanceMatrix
from dmetrics.models.enums import DciBackend, Property

AGGREGATION_TOLERANCE = 1e-12


class MetricReport(BaseModel):
    """One metric evaluated once (one seed) on one factor/code pair."""

    model_config = ConfigDict(frozen=True)

    metric_name: str
    property: Property
    overall: float
    per_factor: list[float] | None = None
    per_code: list[float] | None = None
    # Weights of the documented aggregation; None means a plain mean
    weights: list[float] | None = None
    aggregate: Literal["factor", "code", "none"] = "none"
    seed: int = 0
    flags: list[str] = Field(default_factory=list)
    params: dict[str, Any] = Field(default_factory=dict)
    details: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_aggregation(self) -> "MetricReport":
        if not math.isfinite(self.overall):
            raise ValueError(f"{self.metric_name}: overall score is not finite")
        if self.aggregate == "none":
            return self
        values = self.per_factor if self.aggregate == "factor" else self.per_code
        if not values:
            raise ValueError(f"{self.metric_name}: aggregate over {self.aggregate} needs per-{self.aggregate} values")
        if self.weights is not None and len(self.weights) != len(values):
            raise ValueError(f"{self.metric_name}: {len(self.weights)} weights for {len(values)} values")
        expected = float(np.average(values, weights=self.weights))
        if abs(expected - self.overall) > AGGREGATION_TOLERANCE:
            raise ValueError(
                f"{self.metric_name}: overall {self.overall!r} differs from the {self.aggregate} aggregation {expected!r}"
            )
        return self


class DciReport(BaseModel):
    """Modularity, compactness and explicitness from one family of predictors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    modularity: float
    compactness: float
    explicitness: float
    importance: ImportanceMatrix
    backend: DciBackend
    per_code_modularity: list[float]
    code_relevance: list[float]
    per_factor_compactness: list[float]
    per_factor_explicitness: list[float]
    seed: int = 0
    flags: list[str] = Field(default_factory=list)
    params: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_ranges(self) -> "DciReport":
        for name in ("modularity", "compactness", "explicitness"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"DCI {name} {value!r} is outside [0, 1]")
        m, d = self.importance.shape
        if len(self.per_factor_compactness) != m or len(self.per_code_modularity) != d:
            raise ValueError("DCI per-factor/per-code vectors do not match the importance matrix")
        return self

    def to_reports(self, prefix: str) -> list[MetricReport]:
        """Split into one MetricReport per property, e.g. ``dci-rf-modularity``."""
        common = {"seed": self.seed, "flags": list(self.flags), "params": dict(self.params)}
        importance = {"importance": self.importance.weights.tolist(), "source": self.importance.source.value}
        relevance_total = float(sum(self.code_relevance))
        return [
            MetricReport(
                metric_name=f"{prefix}-modularity",
                property=Property.MODULARITY,
                overall=self.modularity,
                per_code=self.per_code_modularity,
                weights=self.code_relevance if relevance_total > 0 else None,
                aggregate="code",
                details=importance,
                **common,
            ),
            MetricReport(
                metric_name=f"{prefix}-compactness",
                property=Property.COMPACTNESS,
                overall=self.compactness,
                per_factor=self.per_factor_compactness,
                aggregate="factor",
                details=importance,
                **common,
            ),
            MetricReport(
                metric_name=f"{prefix}-explicitness",
                property=Property.EXPLICITNESS,
                overall=self.explicitness,
                per_factor=self.per_factor_explicitness,
                aggregate="factor",
                **common,
            ),
        ]
