"""Integration tests for the score command"""

import json

import pandas as pd
import pytest

from dmetrics.main import main
from dmetrics.services.synthgen import gen_noise_mix

pytestmark = pytest.mark.integration


@pytest.fixture
def identity_files(tmp_path):
    factors, codes = gen_noise_mix(3, 1500, 0.0, seed=0)
    factors_csv = tmp_path / "factors.csv"
    codes_csv = tmp_path / "codes.csv"
    pd.DataFrame(factors.values, columns=factors.factor_names).to_csv(factors_csv, index=False)
    pd.DataFrame(codes.values, columns=codes.dim_names).to_csv(codes_csv, index=False)
    kinds = tmp_path / "kinds.json"
    kinds.write_text(json.dumps({"bounds": {name: [0, 1] for name in factors.factor_names}}))
    return factors_csv, codes_csv, kinds


def _score(files, out, *extra):
    factors_csv, codes_csv, kinds = files
    argv = ["score", "--factors", str(factors_csv), "--codes", str(codes_csv), "--kinds", str(kinds)]
    return main([*argv, "--out", str(out), "--log-format", "plain", *extra])


# Core scoring tests
def test_scores_identity_codes(identity_files, tmp_path):
    out = tmp_path / "out"
    assert _score(identity_files, out, "--metrics", "mig-rmig,sap,dcimig", "--seed", "7") == 0

    scores = pd.read_csv(out / "scores.csv")
    assert list(scores.columns) == ["metric", "property", "mean", "std", "n_seeds", "min", "max"]
    assert scores["metric"].tolist() == ["sap", "mig-rmig", "dcimig"]
    assert (scores["mean"] > 0.9).all()

    report = json.loads((out / "report.json").read_text())
    assert report["seeds"] == [7]
    assert report["failures"] == []
    assert {r["seed"] for r in report["reports"]} == {7}


def test_config_document_selects_metrics(identity_files, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"metrics": ["mig-rmig"], "seeds": [0, 1], "formats": ["json"]}))
    out = tmp_path / "out"
    assert _score(identity_files, out, "--config", str(config)) == 0

    report = json.loads((out / "report.json").read_text())
    assert [a["metric_name"] for a in report["aggregates"]] == ["mig-rmig"]
    assert report["aggregates"][0]["n_seeds"] == 2
    assert not (out / "scores.csv").exists()


def test_metric_failure_exits_with_two(tmp_path):
    factors, codes = gen_noise_mix(1, 600, 0.0, seed=0)
    factors_csv = tmp_path / "f.csv"
    codes_csv = tmp_path / "c.csv"
    pd.DataFrame(factors.values, columns=["v0"]).to_csv(factors_csv, index=False)
    pd.DataFrame(codes.values, columns=["z0"]).to_csv(codes_csv, index=False)
    out = tmp_path / "out"
    argv = ["score", "--factors", str(factors_csv), "--codes", str(codes_csv), "--metrics", "z-diff,mig-rmig"]
    assert main([*argv, "--out", str(out)]) == 2

    report = json.loads((out / "report.json").read_text())
    assert [f["metric_name"] for f in report["failures"]] == ["z-diff"]
    assert [a["metric_name"] for a in report["aggregates"]] == ["mig-rmig"]


# Input error tests
def test_row_mismatch_exits_with_one(identity_files, tmp_path):
    factors_csv, _, kinds = identity_files
    short = tmp_path / "short.csv"
    short.write_text("z0,z1,z2\n0.1,0.2,0.3\n")
    out = tmp_path / "out"
    assert _score((factors_csv, short, kinds), out, "--metrics", "mig-rmig") == 1
    assert not (out / "scores.csv").exists()


def test_unknown_metric_exits_with_one(identity_files, tmp_path):
    assert _score(identity_files, tmp_path / "out", "--metrics", "beta-vae") == 1


def test_invalid_config_exits_with_one(identity_files, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"metrics": ["mig-rmig"], "unexpected": True}))
    assert _score(identity_files, tmp_path / "out", "--config", str(config)) == 1


def test_missing_codes_flag_exits_with_one():
    assert main(["score", "--factors", "factors.csv"]) == 1


def test_nothing_to_score_exits_with_one():
    assert main(["score"]) == 1


def test_experiment_and_files_together_exit_with_one(identity_files, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"experiment": {"generator": "noise-mix", "alpha": 0.0}}))
    assert _score(identity_files, tmp_path / "out", "--config", str(config)) == 1


# Generated data tests
def test_config_experiment_is_generated_and_scored(tmp_path):
    config = tmp_path / "run.json"
    experiment = {"generator": "noise-mix", "alpha": 0.0, "num_factors": 2, "num_samples": 800, "seeds": [0, 1]}
    config.write_text(json.dumps({"experiment": experiment, "metrics": ["mig-rmig"], "formats": ["json"]}))
    out = tmp_path / "out"
    assert main(["score", "--config", str(config), "--out", str(out), "--log-format", "plain"]) == 0

    report = json.loads((out / "report.json").read_text())
    assert report["seeds"] == [0, 1]
    assert report["aggregates"][0]["n_seeds"] == 2
    assert report["aggregates"][0]["mean"] > 0.9


def test_seed_flag_replaces_experiment_seeds(tmp_path):
    config = tmp_path / "run.json"
    experiment = {"generator": "noise-mix", "alpha": 0.0, "num_factors": 2, "num_samples": 800, "seeds": [0, 1]}
    config.write_text(json.dumps({"experiment": experiment, "metrics": ["mig-rmig"], "formats": ["json"]}))
    out = tmp_path / "out"
    assert main(["score", "--config", str(config), "--out", str(out), "--seed", "4"]) == 0
    assert json.loads((out / "report.json").read_text())["seeds"] == [4]


def test_config_document_names_the_files(identity_files, tmp_path):
    factors_csv, codes_csv, kinds = identity_files
    config = tmp_path / "run.json"
    paths = {"factors": str(factors_csv), "codes": str(codes_csv), "kinds": str(kinds)}
    config.write_text(json.dumps({**paths, "metrics": ["sap"], "formats": ["csv"]}))
    out = tmp_path / "out"
    assert main(["score", "--config", str(config), "--out", str(out)]) == 0
    assert pd.read_csv(out / "scores.csv")["metric"].tolist() == ["sap"]
