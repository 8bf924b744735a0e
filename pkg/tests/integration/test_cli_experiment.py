"""Integration tests for the experiment command"""

import json

import pandas as pd
import pytest

from dmetrics.main import main

pytestmark = pytest.mark.integration

FAST = ["--samples", "1500", "--num-seeds", "2", "--metrics", "mig-rmig,jemmig,sap"]


def _run(name, out, *extra):
    return main(["experiment", "--name", name, "--out", str(out), "--log-format", "plain", *FAST, *extra])


def test_noise_experiment_writes_curves_and_figures(tmp_path):
    out = tmp_path / "noise"
    assert _run("noise", out) == 0

    summary = json.loads((out / "summary.json").read_text())
    assert summary["name"] == "noise"
    assert summary["seeds"] == [0, 1]
    assert [c["metric_name"] for c in summary["curves"]] == ["sap", "mig-rmig", "jemmig"]

    curve = pd.read_csv(out / "curves" / "mig-rmig.csv")
    assert curve["x"].tolist() == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    assert curve["mean"].iloc[0] > curve["mean"].iloc[-1]
    assert (out / "figures" / "information.svg").exists()
    assert (out / "figures" / "predictor.svg").exists()


def test_same_seed_gives_identical_files(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert _run("rotation", first, "--seed", "5") == 0
    assert _run("rotation", second, "--seed", "5") == 0

    produced = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    assert produced
    for relative in produced:
        assert (first / relative).read_bytes() == (second / relative).read_bytes()


def test_tangent_experiment_writes_bin_populations(tmp_path):
    out = tmp_path / "tangent"
    assert _run("tangent", out, "--format", "csv") == 0
    populations = pd.read_csv(out / "tangent_bin_populations.csv")
    assert set(populations["alpha"]) == {0.0, 1.0}
    assert not (out / "summary.json").exists()


def test_angle_table_has_no_figures(tmp_path):
    out = tmp_path / "angles"
    assert _run("angles", out) == 0
    summary = pd.read_csv(out / "summary.csv")
    assert summary["configuration"].tolist() == ["[cos,sin]", "[theta,theta]", "[theta,theta,theta,theta]"]
    assert summary["mig-rmig"].iloc[1] == 0.0
    assert not (out / "figures").exists()


@pytest.mark.slow
def test_hidden_experiment_reports_failures(tmp_path):
    out = tmp_path / "hidden"
    argv = ["experiment", "--name", "hidden", "--out", str(out), "--samples", "600", "--num-seeds", "1"]
    assert main([*argv, "--metrics", "z-diff,mig-rmig"]) == 2
    curve = pd.read_csv(out / "curves" / "z-diff.csv")
    assert pd.isna(curve["mean"].iloc[0])
    assert curve["n_failures"].iloc[0] == 1


def test_unknown_experiment_exits_with_one(tmp_path):
    assert main(["experiment", "--name", "spirals", "--out", str(tmp_path)]) == 1
