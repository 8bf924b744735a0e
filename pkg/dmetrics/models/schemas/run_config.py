from typing import Any

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator, model_validator

from dmetrics.core.config import settings
from dmetrics.models.enums import MetricName, OutputFormat
from dmetrics.models.schemas.experiment import ExperimentSpec


class MetricSelection(BaseModel):
    """A metric to run plus its parameter overrides (merged onto MetricParams)."""

    model_config = ConfigDict(extra="forbid")

    name: MetricName
    overrides: dict[str, Any] = Field(default_factory=dict)


class RunConfig(BaseModel):
    """The JSON document accepted by ``dmetrics score --config``."""

    model_config = ConfigDict(extra="forbid")

    # Generated data (seeds come from the experiment) or external CSV files
    experiment: ExperimentSpec | None = None
    factors: str | None = None
    codes: str | None = None
    kinds: str | None = None
    metrics: list[MetricSelection] = Field(default_factory=lambda: [MetricSelection(name=m) for m in MetricName])
    # Applied to every metric before its own overrides
    params: dict[str, Any] = Field(default_factory=dict)
    seeds: list[int] = Field(default_factory=lambda: [settings.DEFAULT_SEED])
    output_dir: str | None = None
    formats: list[OutputFormat] = Field(default_factory=lambda: [OutputFormat.CSV, OutputFormat.JSON])
    jobs: PositiveInt = Field(default_factory=lambda: settings.DEFAULT_JOBS)

    @field_validator("metrics", mode="before")
    @classmethod
    def accept_plain_names(cls, v: Any) -> Any:
        # ["mig-rmig", {"name": "sap", "overrides": {...}}] are both accepted
        if isinstance(v, list):
            return [{"name": item} if isinstance(item, str) else item for item in v]
        return v

    @field_validator("metrics")
    @classmethod
    def unique_metrics(cls, v: list[MetricSelection]) -> list[MetricSelection]:
        if not v:
            raise ValueError("At least one metric must be selected")
        names = [m.name for m in v]
        if len(set(names)) != len(names):
            raise ValueError("Each metric may be selected once")
        return v

    @field_validator("seeds")
    @classmethod
    def unique_seeds(cls, v: list[int]) -> list[int]:
        if not v or len(set(v)) != len(v):
            raise ValueError("seeds must be a non-empty list of distinct integers")
        return v

    @model_validator(mode="after")
    def one_data_source(self) -> "RunConfig":
        if self.experiment is None:
            return self
        if self.factors or self.codes or self.kinds:
            raise ValueError("Give either an experiment or factor/code files, not both")
        if "seeds" in self.model_fields_set:
            raise ValueError("Seeds of a generated run belong in experiment.seeds")
        return self

    @property
    def run_seeds(self) -> list[int]:
        return self.experiment.seeds if self.experiment is not None else self.seeds
