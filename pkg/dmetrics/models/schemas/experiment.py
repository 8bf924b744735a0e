from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from dmetrics.models.enums import Generator
from dmetrics.models.schemas.params import BinningSpec


class ExperimentSpec(BaseModel):
    """One controlled data-generation setting (a single point of a sweep)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    generator: Generator
    alpha: float | None = Field(default=None, ge=0.0, le=1.0)
    num_factors: PositiveInt = 8
    num_samples: PositiveInt = 5000
    bins: BinningSpec = Field(default_factory=BinningSpec)
    seeds: list[int] = Field(default_factory=lambda: [0])
    # redundant(k): codes per factor
    redundancy: PositiveInt = 2
    # hidden-factors: share of factors the metrics get to see
    fraction: float | None = Field(default=None, gt=0.0, le=1.0)
    snap_to_grid: bool = False

    @model_validator(mode="after")
    def check_generator_fields(self) -> "ExperimentSpec":
        needs_alpha = {Generator.NOISE_MIX, Generator.ROTATION, Generator.TANGENT}
        if self.generator in needs_alpha and self.alpha is None:
            raise ValueError(f"{self.generator.value} needs alpha")
        if self.generator == Generator.HIDDEN_FACTORS and self.fraction is None:
            raise ValueError("hidden-factors needs fraction")
        if self.generator == Generator.ROTATION and self.num_factors < 2:
            raise ValueError("rotation needs at least 2 factors")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be a non-empty list of distinct integers")
        return self
