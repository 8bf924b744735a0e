"""Local file storage for inputs (CSV + sidecar JSON) and results (CSV, JSON, SVG)."""

import json
import logging
import re
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from dmetrics.core.config import settings
from dmetrics.core.errors import ConfigError, DataParseError, EmptyInputError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import FactorKind

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"
_PANDAS_LINE = re.compile(r"line (\d+)")
# Spellings accepted as a (non-finite) number; validation reports them later with their position
_NON_FINITE = {"nan", "inf", "+inf", "-inf", "infinity", "+infinity", "-infinity"}


class FactorSidecar(BaseModel):
    """Optional JSON next to a factor CSV declaring kinds and support bounds by column name."""

    model_config = ConfigDict(extra="forbid")

    kinds: dict[str, FactorKind] = Field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = Field(default_factory=dict)


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except FileNotFoundError as e:
        raise DataParseError(str(path), 0, "file not found") from e
    except pd.errors.EmptyDataError as e:
        raise DataParseError(str(path), 1, "file is empty") from e
    except pd.errors.ParserError as e:
        match = _PANDAS_LINE.search(str(e))
        raise DataParseError(str(path), int(match.group(1)) if match else 0, str(e).strip()) from e


def _to_numeric(frame: pd.DataFrame, path: Path) -> np.ndarray:
    """Convert every cell; the first unparsable one is reported with its file line (header is line 1)."""
    out = np.empty(frame.shape, dtype=np.float64)
    for c, column in enumerate(frame.columns):
        raw = frame[column].astype(str).str.strip()
        parsed = pd.to_numeric(raw, errors="coerce")
        bad = parsed.isna().to_numpy() & ~raw.str.lower().isin(_NON_FINITE).to_numpy()
        if bad.any():
            row = int(np.flatnonzero(bad)[0])
            raise DataParseError(str(path), row + 2, f"column '{column}': cannot parse {raw.iloc[row]!r} as a number")
        out[:, c] = parsed.to_numpy(dtype=np.float64)
    return out


def read_matrix_csv(path: str | Path) -> tuple[np.ndarray, list[str]]:
    """Headered CSV with one row per sample -> (N x k array, column names)."""
    path = Path(path)
    frame = _read_frame(path)
    if frame.shape[1] == 0:
        raise DataParseError(str(path), 1, "no columns")
    if frame.shape[0] == 0:
        raise EmptyInputError(f"{path} has a header but no samples")
    return _to_numeric(frame, path), [str(c).strip() for c in frame.columns]


def read_sidecar(path: str | Path) -> FactorSidecar:
    path = Path(path)
    try:
        return FactorSidecar.model_validate(json.loads(path.read_text()))
    except FileNotFoundError as e:
        raise ConfigError(f"Kinds file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise DataParseError(str(path), e.lineno, e.msg) from e
    except ValidationError as e:
        raise ConfigError(f"Invalid kinds file {path}: {e}") from e


def load_factors(path: str | Path, kinds_path: str | Path | None = None) -> FactorMatrix:
    values, names = read_matrix_csv(path)
    sidecar = read_sidecar(kinds_path) if kinds_path else FactorSidecar()
    unknown = (set(sidecar.kinds) | set(sidecar.bounds)) - set(names)
    if unknown:
        raise ConfigError(f"Kinds file names unknown factor columns: {sorted(unknown)}")
    try:
        return FactorMatrix(
            values=values,
            factor_names=names,
            kinds=[sidecar.kinds.get(n, FactorKind.CONTINUOUS) for n in names],
            bounds=[sidecar.bounds.get(n) for n in names],
        )
    except ValidationError as e:
        raise ConfigError(f"Invalid factors in {path}: {e}") from e


def load_codes(path: str | Path) -> CodeMatrix:
    values, names = read_matrix_csv(path)
    return CodeMatrix(values=values, dim_names=names)


def read_score_table(path: str | Path) -> pd.DataFrame:
    """
    Configurations x metrics score table. A non-numeric first column is taken
    as the configuration label.
    """
    path = Path(path)
    frame = _read_frame(path)
    if frame.shape[0] == 0:
        raise EmptyInputError(f"{path} has no configurations")
    first = frame.columns[0]
    labels = None
    if pd.to_numeric(frame[first].str.strip(), errors="coerce").isna().any():
        labels = frame[first].str.strip().tolist()
        frame = frame.drop(columns=[first])
    table = pd.DataFrame(_to_numeric(frame, path), columns=[str(c).strip() for c in frame.columns], index=labels)
    if not np.isfinite(table.to_numpy()).all():
        raise DataParseError(str(path), 0, "score tables must contain finite values only")
    return table


class LocalResultStore:
    """Write result files under one output directory."""

    def __init__(self, output_dir: str | Path | None = None):
        self.output_dir = Path(output_dir) if output_dir else settings.RESOLVED_OUTPUT_DIR
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def path(self, relative: str) -> Path:
        dest = self.output_dir / relative
        dest.parent.mkdir(parents=True, exist_ok=True)
        return dest

    def write_csv(self, relative: str, frame: pd.DataFrame, index: bool = False) -> Path:
        dest = self.path(relative)
        frame.to_csv(dest, index=index, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info("Wrote CSV", extra={"path": str(dest), "rows": int(frame.shape[0])})
        return dest

    def write_json(self, relative: str, model: BaseModel | dict) -> Path:
        dest = self.path(relative)
        if isinstance(model, BaseModel):
            text = model.model_dump_json(indent=2)
        else:
            text = json.dumps(model, indent=2, sort_keys=True)
        dest.write_text(text + "\n")
        logger.info("Wrote JSON", extra={"path": str(dest)})
        return dest

    def write_text(self, relative: str, text: str) -> Path:
        dest = self.path(relative)
        dest.write_text(text)
        logger.info("Wrote file", extra={"path": str(dest)})
        return dest
