"""Tests for lasso coordinate descent"""

import numpy as np
import pytest

from dmetrics.core.errors import InsufficientDataError, ShapeMismatchError
from dmetrics.services.predictors.lasso import fit_lasso, soft_threshold


def test_soft_threshold():
    assert soft_threshold(3.0, 1.0) == 2.0
    assert soft_threshold(-3.0, 1.0) == -2.0
    assert soft_threshold(0.5, 1.0) == 0.0


def test_unpenalized_fit_recovers_identity(rng):
    x = rng.normal(size=(500, 1))
    model = fit_lasso(x, x[:, 0], lam=0.0)
    assert model.weights[0] == pytest.approx(1.0, abs=1e-6)
    assert model.intercept == pytest.approx(0.0, abs=1e-6)
    assert model.converged


def test_huge_penalty_zeroes_every_weight(rng):
    X = rng.normal(size=(300, 4))
    model = fit_lasso(X, X @ np.array([1.0, -2.0, 0.5, 0.0]), lam=1e6)
    np.testing.assert_array_equal(model.weights, np.zeros(4))
    assert model.importances.sum() == 0.0


def test_single_feature_matches_closed_form(rng):
    x = rng.normal(size=400)
    y = 0.7 * x + rng.normal(scale=0.3, size=400)
    lam = 0.05
    model = fit_lasso(x[:, None], y, lam=lam)

    xs = (x - x.mean()) / x.std()
    expected = soft_threshold(float(xs @ (y - y.mean()) / x.shape[0]), lam)
    assert model.standardized_weights[0] == pytest.approx(expected, abs=1e-9)


def test_objective_never_increases(rng):
    X = rng.normal(size=(200, 5))
    y = X[:, 0] - X[:, 3] + rng.normal(scale=0.1, size=200)
    history = fit_lasso(X, y, lam=0.01).objective_history
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:], strict=False))


def test_constant_feature_gets_zero_weight(rng):
    X = np.column_stack([rng.normal(size=100), np.full(100, 4.0)])
    model = fit_lasso(X, X[:, 0], lam=0.0)
    assert model.weights[1] == 0.0


def test_predict_checks_feature_count(rng):
    model = fit_lasso(rng.normal(size=(50, 2)), rng.normal(size=50), lam=0.1)
    with pytest.raises(ShapeMismatchError):
        model.predict(np.zeros((3, 5)))


def test_rejects_bad_inputs():
    with pytest.raises(InsufficientDataError):
        fit_lasso(np.zeros((1, 2)), np.zeros(1), lam=0.1)
    with pytest.raises(ShapeMismatchError):
        fit_lasso(np.zeros((4, 2)), np.zeros(3), lam=0.1)
    with pytest.raises(ValueError, match="nonnegative"):
        fit_lasso(np.zeros((4, 2)), np.zeros(4), lam=-1.0)
