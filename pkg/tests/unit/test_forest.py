"""Tests for decision trees and random forests"""

import numpy as np
import pytest

from dmetrics.core.errors import ShapeMismatchError
from dmetrics.services.predictors.evaluation import accuracy
from dmetrics.services.predictors.forest import fit_forest


def test_step_feature_dominates_importance(rng):
    X = rng.random((1000, 2))
    y = (X[:, 0] > 0.5).astype(float)
    forest = fit_forest(X, y, num_trees=10, seed=3)
    assert forest.importances[0] > 0.95
    assert forest.importances.sum() == pytest.approx(1.0)


def test_constant_target_gives_degenerate_stump(rng):
    X = rng.random((100, 3))
    forest = fit_forest(X, np.full(100, 2.5))
    assert forest.degenerate
    np.testing.assert_array_equal(forest.importances, np.zeros(3))
    np.testing.assert_allclose(forest.predict(X), 2.5)


def test_depth_one_tree_separates_two_classes(rng):
    X = rng.random((400, 2))
    labels = np.where(X[:, 1] > 0.3, 7, 3)
    forest = fit_forest(
        X, labels, num_trees=1, max_depth=1, min_leaf=1, bootstrap=False, mode="classification"
    )
    assert forest.trees[0].depth == 1
    assert accuracy(forest.predict(X), labels) == 1.0
    assert set(np.unique(forest.predict(X))) == {3, 7}


def test_class_probabilities_sum_to_one(rng):
    X = rng.random((300, 2))
    labels = (X[:, 0] * 3).astype(int)
    proba = fit_forest(X, labels, num_trees=5, mode="classification").predict_proba(X)
    assert proba.shape == (300, 3)
    np.testing.assert_allclose(proba.sum(axis=1), 1.0)


def test_max_depth_is_respected(rng):
    X = rng.random((500, 3))
    forest = fit_forest(X, X.sum(axis=1), num_trees=4, max_depth=2)
    assert all(tree.depth <= 2 for tree in forest.trees)


def test_same_seed_same_forest(rng):
    X = rng.random((200, 4))
    y = X[:, 2] ** 2
    a = fit_forest(X, y, seed=11)
    b = fit_forest(X, y, seed=11)
    np.testing.assert_array_equal(a.importances, b.importances)
    np.testing.assert_array_equal(a.predict(X), b.predict(X))


def test_regression_forest_has_no_probabilities(rng):
    X = rng.random((50, 2))
    forest = fit_forest(X, X[:, 0])
    with pytest.raises(ValueError, match="classification"):
        forest.predict_proba(X)
    with pytest.raises(ShapeMismatchError):
        forest.predict(np.zeros((2, 5)))
