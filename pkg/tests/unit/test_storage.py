"""Tests for CSV/JSON input loading and the local result store"""

import json

import numpy as np
import pandas as pd
import pytest

from dmetrics.core.errors import ConfigError, DataParseError, EmptyInputError, NonFiniteDataError
from dmetrics.models.enums import FactorKind
from dmetrics.models.schemas.results import KendallMatrix
from dmetrics.services.storage import (
    LocalResultStore,
    load_codes,
    load_factors,
    read_matrix_csv,
    read_score_table,
)
from dmetrics.services.validator import validate_pair


def _write(path, text):
    path.write_text(text)
    return path


# Matrix CSV
def test_read_matrix_csv(tmp_path):
    values, names = read_matrix_csv(_write(tmp_path / "codes.csv", "z0, z1\n0.5,1\n-2,3e-1\n"))
    assert names == ["z0", "z1"]
    np.testing.assert_allclose(values, [[0.5, 1.0], [-2.0, 0.3]])


def test_unparsable_cell_reports_its_line(tmp_path):
    path = _write(tmp_path / "codes.csv", "x,y\n0.1,0.2\n0.3,abc\n")
    with pytest.raises(DataParseError, match="codes.csv:3") as exc:
        read_matrix_csv(path)
    assert exc.value.line == 3


def test_ragged_row_reports_its_line(tmp_path):
    with pytest.raises(DataParseError) as exc:
        read_matrix_csv(_write(tmp_path / "bad.csv", "a,b\n1,2\n3,4,5\n"))
    assert exc.value.line == 3


def test_missing_and_empty_files(tmp_path):
    with pytest.raises(DataParseError, match="file not found"):
        read_matrix_csv(tmp_path / "nope.csv")
    with pytest.raises(DataParseError, match="file is empty"):
        read_matrix_csv(_write(tmp_path / "empty.csv", ""))
    with pytest.raises(EmptyInputError):
        read_matrix_csv(_write(tmp_path / "header.csv", "a,b\n"))


def test_non_finite_cells_load_and_fail_validation(tmp_path):
    factors = load_factors(_write(tmp_path / "f.csv", "v0\n0.1\n0.2\n"))
    codes = load_codes(_write(tmp_path / "c.csv", "z0\n0.1\nnan\n"))
    with pytest.raises(NonFiniteDataError, match="row 1, column 0"):
        validate_pair(factors, codes)


# Factor sidecar
def test_sidecar_sets_kinds_and_bounds(tmp_path):
    csv = _write(tmp_path / "f.csv", "shape,x\n0,0.1\n2,0.9\n")
    kinds = _write(tmp_path / "kinds.json", json.dumps({"kinds": {"shape": "categorical"}, "bounds": {"x": [0, 1]}}))
    factors = load_factors(csv, kinds)
    assert factors.kinds == [FactorKind.CATEGORICAL, FactorKind.CONTINUOUS]
    assert factors.bounds == [None, (0.0, 1.0)]


def test_sidecar_errors(tmp_path):
    csv = _write(tmp_path / "f.csv", "x\n0.1\n0.4\n")
    with pytest.raises(ConfigError, match="unknown factor columns"):
        load_factors(csv, _write(tmp_path / "a.json", '{"kinds": {"y": "continuous"}}'))
    with pytest.raises(ConfigError, match="Invalid kinds file"):
        load_factors(csv, _write(tmp_path / "b.json", '{"kinds": {"x": "ordinal"}}'))
    with pytest.raises(DataParseError):
        load_factors(csv, _write(tmp_path / "c.json", '{"kinds": '))
    with pytest.raises(ConfigError, match="not found"):
        load_factors(csv, tmp_path / "missing.json")


def test_categorical_factor_must_hold_classes(tmp_path):
    csv = _write(tmp_path / "f.csv", "shape\n0.5\n1\n")
    kinds = _write(tmp_path / "kinds.json", '{"kinds": {"shape": "categorical"}}')
    with pytest.raises(ConfigError, match="nonnegative integer classes"):
        load_factors(csv, kinds)


# Score tables
def test_score_table_with_labels(tmp_path):
    table = read_score_table(_write(tmp_path / "t.csv", "model,mig-rmig,sap\nA,0.1,0.2\nB,0.3,0.1\n"))
    assert list(table.columns) == ["mig-rmig", "sap"]
    assert list(table.index) == ["A", "B"]


def test_score_table_without_labels(tmp_path):
    table = read_score_table(_write(tmp_path / "t.csv", "mig-rmig,sap\n0.1,0.2\n0.3,0.1\n"))
    assert list(table.columns) == ["mig-rmig", "sap"]
    assert table.shape == (2, 2)


def test_score_table_rejects_non_finite_values(tmp_path):
    with pytest.raises(DataParseError, match="finite"):
        read_score_table(_write(tmp_path / "t.csv", "a,b\n0.1,inf\n0.2,0.3\n"))


# Result store
def test_store_defaults_to_settings_output_dir(output_dir):
    store = LocalResultStore()
    assert store.output_dir == output_dir
    assert output_dir.is_dir()


def test_store_writes_csv_json_and_text(tmp_path):
    store = LocalResultStore(tmp_path / "out")
    csv_path = store.write_csv("nested/scores.csv", pd.DataFrame({"metric": ["sap"], "mean": [1 / 3]}))
    assert csv_path.read_text() == "metric,mean\nsap,0.333333\n"

    model = KendallMatrix(metrics=["a", "b"], values=[[100.0, 50.0], [50.0, 100.0]], n_configurations=3)
    json_path = store.write_json("kendall.json", model)
    assert json.loads(json_path.read_text())["n_configurations"] == 3
    assert json_path.read_text().endswith("}\n")

    assert store.write_text("fig.svg", "<svg/>").read_text() == "<svg/>"
