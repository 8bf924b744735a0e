"""Tests for the controlled experiment sweeps"""

import math

import pandas as pd
import pytest

from dmetrics.models.enums import ExperimentName, Generator, MetricName, OutputFormat, Profile
from dmetrics.services.experiments import (
    ALPHA_GRID,
    configurations,
    experiment_params,
    profile_size,
    run_experiment,
    summary_table,
    tangent_bin_populations,
    write_experiment,
)
from dmetrics.services.storage import LocalResultStore

CHEAP = [MetricName.MIG, MetricName.SAP]


def test_profile_sizes():
    assert profile_size(Profile.DESK) == (5000, 10)
    assert profile_size(Profile.PAPER) == (20000, 100)


# Configurations
def test_noise_sweep():
    x_label, configs = configurations(ExperimentName.NOISE, 100)
    assert x_label == "alpha"
    assert [c.x for c in configs] == ALPHA_GRID
    assert configs[1].label == "alpha=0.2"
    assert all(c.spec.num_samples == 100 and c.spec.num_factors == 8 for c in configs)


def test_rotation_sweep_stops_at_half():
    _, configs = configurations(ExperimentName.ROTATION, 100)
    assert configs[-1].x == 0.5
    assert {c.spec.generator for c in configs} == {Generator.ROTATION}


def test_hidden_sweep():
    _, configs = configurations(ExperimentName.HIDDEN, 100)
    assert [c.label for c in configs][:2] == ["1/8", "2/8"]
    assert configs[-1].spec.fraction == 1.0
    assert all(c.spec.alpha == 0.0 for c in configs)


def test_angle_rows():
    _, configs = configurations(ExperimentName.ANGLES, 100)
    assert [c.label for c in configs] == ["[cos,sin]", "[theta,theta]", "[theta,theta,theta,theta]"]
    assert [c.spec.redundancy for c in configs[1:]] == [2, 4]


def test_configurations_carry_the_seeds():
    _, configs = configurations(ExperimentName.ANGLES, 100, [4, 5])
    assert all(c.spec.seeds == [4, 5] for c in configs)
    _, configs = configurations(ExperimentName.TANGENT, 100)
    assert all(c.spec.seeds == [0] for c in configs)


def test_z_max_gets_coarse_bins():
    params = experiment_params([MetricName.Z_MAX, MetricName.Z_DIFF])
    assert list(params) == [MetricName.Z_DIFF, MetricName.Z_MAX]
    assert params[MetricName.Z_MAX].intervention.zmax_num_bins == 3
    assert params[MetricName.Z_DIFF].intervention.zmax_num_bins is None


# Runs
@pytest.fixture(scope="module")
def noise_result():
    return run_experiment(ExperimentName.NOISE, seed=3, metrics=CHEAP, num_samples=2000, num_seeds=2)


def test_noise_experiment_curves(noise_result):
    assert noise_result.seeds == [3, 4]
    assert noise_result.ok
    assert [c.metric_name for c in noise_result.curves] == ["sap", "mig-rmig"]
    mig = noise_result.curves[1]
    assert [p.n_seeds for p in mig.points] == [2] * len(ALPHA_GRID)
    assert mig.points[0].mean > 0.8
    assert mig.points[-1].mean < 0.2


def test_summary_table(noise_result):
    table = summary_table(noise_result)
    assert list(table.columns) == ["configuration", "alpha", "sap", "mig-rmig"]
    assert table.shape[0] == len(ALPHA_GRID)


def test_write_experiment(noise_result, tmp_path):
    store = LocalResultStore(tmp_path / "noise")
    written = write_experiment(noise_result, store, [OutputFormat.CSV, OutputFormat.JSON, OutputFormat.SVG])
    names = sorted(p.replace(str(tmp_path / "noise") + "/", "") for p in written)
    assert names == [
        "curves/mig-rmig.csv",
        "curves/sap.csv",
        "figures/information.svg",
        "figures/predictor.svg",
        "summary.csv",
        "summary.json",
    ]
    curve = pd.read_csv(tmp_path / "noise" / "curves" / "mig-rmig.csv")
    assert list(curve.columns) == ["configuration", "x", "mean", "std", "n_seeds", "n_failures"]


def test_runs_are_repeatable(noise_result):
    again = run_experiment(ExperimentName.NOISE, seed=3, metrics=CHEAP, num_samples=2000, num_seeds=2)
    assert again.model_dump() == noise_result.model_dump()


@pytest.mark.slow
def test_hidden_experiment_leaves_a_gap_at_one_factor():
    result = run_experiment(
        ExperimentName.HIDDEN, metrics=[MetricName.Z_DIFF, MetricName.MIG], num_samples=600, num_seeds=1
    )
    z_diff = next(c for c in result.curves if c.metric_name == "z-diff")
    assert z_diff.points[0].mean is None
    assert z_diff.points[0].n_failures == 1
    assert all(p.mean is not None for p in z_diff.points[1:])
    assert result.failures[0].message.startswith("1/8: ")
    assert not result.ok


@pytest.mark.slow
def test_angle_rows_match_the_printed_table():
    metrics = [
        MetricName.Z_DIFF,
        MetricName.DCI_LASSO,
        MetricName.SAP,
        MetricName.MIG,
        MetricName.MIG_SUP,
        MetricName.JEMMIG,
        MetricName.MODULARITY_SCORE,
        MetricName.DCIMIG,
    ]
    result = run_experiment(ExperimentName.ANGLES, metrics=metrics, num_samples=5000, num_seeds=2)
    assert result.ok
    rows = summary_table(result).set_index("configuration")
    trig, pair, quad = rows.loc["[cos,sin]"], rows.loc["[theta,theta]"], rows.loc["[theta,theta,theta,theta]"]

    assert trig["z-diff"] > 0.9
    assert 0.7 < trig["dci-lasso-modularity"] < 0.95
    assert 0.5 < trig["dci-lasso-explicitness"] < 0.7
    assert 0.5 < trig["sap"] < 0.7
    assert trig["mig-rmig"] < 0.1
    assert 0.55 < trig["mig-sup"] < 0.8
    assert 0.25 < trig["jemmig"] < 0.5
    assert trig["modularity-score"] > 0.9
    assert 0.5 < trig["dcimig"] < 0.75

    for row in (pair, quad):
        assert row["z-diff"] > 0.9
        assert row["dci-lasso-modularity"] > 0.99
        assert row["dci-lasso-compactness"] > 0.99
        assert row["dci-lasso-explicitness"] > 0.99
        # duplicated codes tie, so every gap closes
        assert row["sap"] == pytest.approx(0.0, abs=1e-12)
        assert row["mig-rmig"] == pytest.approx(0.0, abs=1e-12)
        assert row["mig-sup"] > 0.9
        assert 0.4 < row["jemmig"] < 0.6
        assert row["modularity-score"] > 0.9
        assert row["dcimig"] > 0.9


# Tangent populations
def test_tangent_bin_populations():
    frame = tangent_bin_populations(2000, seed=0, num_bins=10)
    assert frame.shape == (20, 4)
    for alpha in (0.0, 1.0):
        part = frame[frame["alpha"] == alpha]
        assert part["count"].sum() == 2000 * 8
        assert math.isclose(part["fraction"].sum(), 1.0)
    flat = frame[frame["alpha"] == 1.0]
    # the flattened map piles samples into the central bins
    assert flat["fraction"].max() > 0.3
