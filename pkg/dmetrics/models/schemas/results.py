from pydantic import BaseModel, Field

from dmetrics.models.enums import ExperimentName, Profile, Property
from dmetrics.models.reports import MetricReport


class SeedAggregate(BaseModel):
    """Mean and sample standard deviation of one metric over seeds."""

    metric_name: str
    property: Property
    mean: float
    std: float
    n_seeds: int
    minimum: float
    maximum: float
    per_factor_mean: list[float] | None = None
    per_code_mean: list[float] | None = None


class MetricFailure(BaseModel):
    metric_name: str
    seed: int
    error_type: str
    message: str


class ScoreRunResult(BaseModel):
    aggregates: list[SeedAggregate] = Field(default_factory=list)
    reports: list[MetricReport] = Field(default_factory=list)
    failures: list[MetricFailure] = Field(default_factory=list)
    seeds: list[int] = Field(default_factory=list)
    params: dict = Field(default_factory=dict)
    wall_time_seconds: float | None = None

    @property
    def ok(self) -> bool:
        return not self.failures


class CurvePoint(BaseModel):
    x: float
    label: str | None = None
    mean: float | None = None
    std: float | None = None
    n_seeds: int = 0
    n_failures: int = 0


class MetricCurve(BaseModel):
    metric_name: str
    property: Property | None = None
    points: list[CurvePoint] = Field(default_factory=list)


class KendallMatrix(BaseModel):
    """Kendall tau-b between metric rankings, scaled by 100."""

    metrics: list[str]
    values: list[list[float]]
    n_configurations: int


class ExperimentResult(BaseModel):
    """Everything one experiment sweep produced; written as summary.json."""

    name: ExperimentName
    profile: Profile
    num_samples: int
    seeds: list[int]
    x_label: str
    curves: list[MetricCurve] = Field(default_factory=list)
    failures: list[MetricFailure] = Field(default_factory=list)
    params: dict = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures
