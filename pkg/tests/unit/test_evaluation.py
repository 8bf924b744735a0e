"""Tests for prediction scoring and cross-validation"""

import numpy as np
import pytest

from dmetrics.core.errors import InsufficientDataError, ShapeMismatchError, SingleClassError
from dmetrics.services.predictors.evaluation import (
    balanced_accuracy,
    cross_validate,
    fold_indices,
    mse,
    roc_auc,
    train_test_split,
)
from dmetrics.services.predictors.lasso import fit_lasso


def _mse_scorer(model, X, y):
    return mse(model.predict(X), y)


# Scores
def test_mse():
    y = np.array([1.0, 2.0, 3.0])
    assert mse(y, y) == 0.0
    with pytest.raises(ShapeMismatchError):
        mse(y, y[:2])


def test_mse_of_independent_uniforms(rng):
    assert mse(rng.random(100_000), rng.random(100_000)) == pytest.approx(1 / 6, abs=0.005)


def test_roc_auc():
    labels = np.array([0, 0, 1, 1])
    assert roc_auc(np.array([0.1, 0.4, 0.35, 0.8]), labels) == pytest.approx(0.75)
    assert roc_auc(np.array([0.1, 0.2, 0.3, 0.4]), labels) == 1.0
    assert roc_auc(np.array([0.4, 0.3, 0.2, 0.1]), labels) == 0.0
    assert roc_auc(np.ones(4), labels) == 0.5


def test_roc_auc_matches_pair_counting(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 30))
        labels = rng.random(n) < 0.5
        labels[0], labels[1] = True, False
        # few distinct values so ties occur
        scores = rng.integers(0, 6, size=n).astype(float)
        pos, neg = scores[labels], scores[~labels]
        wins = (pos[:, None] > neg[None, :]).sum() + 0.5 * (pos[:, None] == neg[None, :]).sum()
        assert roc_auc(scores, labels) == pytest.approx(wins / (pos.size * neg.size), abs=1e-12)


def test_roc_auc_needs_both_classes():
    with pytest.raises(SingleClassError):
        roc_auc(np.array([0.1, 0.2]), np.array([1, 1]))


def test_balanced_accuracy():
    y = np.array([0, 0, 0, 1])
    assert balanced_accuracy(y, y) == 1.0
    assert balanced_accuracy(np.zeros(4), y) == 0.5


# Splits
def test_train_test_split_partitions_rows(rng):
    train, test = train_test_split(10, 0.3, rng)
    assert len(test) == 3
    assert sorted(np.concatenate([train, test]).tolist()) == list(range(10))


def test_fold_indices_partition_rows():
    parts = fold_indices(11, 3, seed=0)
    assert [len(p) for p in parts] == [4, 4, 3]
    assert sorted(np.concatenate(parts).tolist()) == list(range(11))
    with pytest.raises(InsufficientDataError):
        fold_indices(2, 3, seed=0)


# Cross-validation
def test_single_entry_grid_is_returned(rng):
    X = rng.normal(size=(60, 1))
    result = cross_validate(fit_lasso, X, X[:, 0], 3, [{"lam": 0.5}], _mse_scorer, greater_is_better=False)
    assert result.best_params == {"lam": 0.5}
    assert len(result.scores) == 1


def test_picks_the_unpenalized_lasso_for_a_noiseless_target(rng):
    X = rng.normal(size=(90, 1))
    result = cross_validate(
        fit_lasso, X, X[:, 0], 3, [{"lam": 1e6}, {"lam": 0.0}], _mse_scorer, greater_is_better=False
    )
    assert result.best_params == {"lam": 0.0}
    assert result.best_score == pytest.approx(0.0, abs=1e-10)


def test_empty_grid_rejected(rng):
    with pytest.raises(ValueError, match="param_grid"):
        cross_validate(fit_lasso, rng.normal(size=(9, 1)), np.zeros(9), 3, [], _mse_scorer)
