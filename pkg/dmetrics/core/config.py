from pathlib import Path

from pydantic import computed_field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_prefix="DMETRICS_", case_sensitive=False, extra="ignore")

    PROJECT_NAME: str = "disentanglement-metrics"

    # Default output directory for every command (overridden by --out)
    OUTPUT_DIR: str = "results"

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "json"  # json | plain

    # Run defaults
    DEFAULT_SEED: int = 0
    DEFAULT_JOBS: int = 1
    NUM_BINS: int = 10

    # Experiment profiles
    DESK_SAMPLES: int = 5000
    DESK_SEEDS: int = 10
    PAPER_SAMPLES: int = 20000
    PAPER_SEEDS: int = 100

    # Z-max needs every factor but one fixed; 10 bins per factor empties the strata at M=8
    ZMAX_BINS: int = 3

    # Wall time makes report.json non-deterministic; experiments never record it
    RECORD_WALL_TIME: bool = True

    TESTING: bool = False

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    @field_validator("NUM_BINS", "ZMAX_BINS")
    @classmethod
    def at_least_two_bins(cls, v: int) -> int:
        if v < 2:
            raise ValueError("Bin counts must be at least 2")
        return v

    @computed_field  # type: ignore[prop-decorator]
    @property
    def RESOLVED_OUTPUT_DIR(self) -> Path:
        return Path(self.OUTPUT_DIR).expanduser()


settings = Settings()
