"""Prediction scoring, splits and k-fold cross-validation."""

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.stats import rankdata

from dmetrics.core.errors import InsufficientDataError, ShapeMismatchError, SingleClassError

logger = logging.getLogger(__name__)


def predict(model: Any, X: np.ndarray) -> np.ndarray:
    """Pointwise prediction; every fitted model checks its feature count."""
    return model.predict(np.asarray(X, dtype=np.float64))


def mse(yhat: np.ndarray, y: np.ndarray) -> float:
    yhat = np.asarray(yhat, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if yhat.shape != y.shape:
        raise ShapeMismatchError(f"Cannot compare {yhat.shape[0]} predictions with {y.shape[0]} targets")
    return float(np.mean((yhat - y) ** 2))


def roc_auc(scores: np.ndarray, binary_labels: np.ndarray) -> float:
    """Mann-Whitney U / (n_pos · n_neg); tied scores count one half."""
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(binary_labels).ravel().astype(bool)
    if scores.shape != labels.shape:
        raise ShapeMismatchError(f"{scores.shape[0]} scores for {labels.shape[0]} labels")
    n_pos = int(labels.sum())
    n_neg = labels.shape[0] - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError("ROC AUC needs both positive and negative samples")
    ranks = rankdata(scores, method="average")
    u = ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def accuracy(pred: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(np.asarray(pred) == np.asarray(y)))


def balanced_accuracy(pred: np.ndarray, y: np.ndarray) -> float:
    """Mean per-class recall over the classes present in ``y``."""
    pred = np.asarray(pred)
    y = np.asarray(y)
    recalls = [np.mean(pred[y == c] == c) for c in np.unique(y)]
    return float(np.mean(recalls))


def train_test_split(n: int, test_fraction: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Shuffled (train, test) row indices; both sides keep at least one row."""
    if n < 2:
        raise InsufficientDataError(f"Cannot split {n} samples into train and test")
    n_test = min(max(int(round(n * test_fraction)), 1), n - 1)
    perm = rng.permutation(n)
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def fold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    if folds < 2:
        raise InsufficientDataError(f"Cross-validation needs at least 2 folds, got {folds}")
    if n < folds:
        raise InsufficientDataError(f"Cannot build {folds} folds from {n} samples")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, folds)]


@dataclass(frozen=True)
class CrossValidationResult:
    best_params: dict
    best_score: float
    scores: list[float]


def cross_validate(
    fitter: Callable[..., Any],
    X: np.ndarray,
    y: np.ndarray,
    folds: int,
    param_grid: Sequence[dict],
    scorer: Callable[[Any, np.ndarray, np.ndarray], float],
    greater_is_better: bool = True,
    seed: int = 0,
) -> CrossValidationResult:
    """
    Pick the grid entry with the best mean held-out score.

    ``fitter(X, y, **params)`` returns a model, ``scorer(model, X, y)`` rates
    it. Ties go to the earliest grid entry.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if not param_grid:
        raise ValueError("param_grid must not be empty")
    parts = fold_indices(X.shape[0], folds, seed)

    scores: list[float] = []
    for params in param_grid:
        fold_scores = []
        for k, test_idx in enumerate(parts):
            train_idx = np.concatenate([p for j, p in enumerate(parts) if j != k])
            model = fitter(X[train_idx], y[train_idx], **params)
            fold_scores.append(scorer(model, X[test_idx], y[test_idx]))
        scores.append(float(np.mean(fold_scores)))

    best = 0
    for i, score in enumerate(scores):
        if (score > scores[best]) if greater_is_better else (score < scores[best]):
            best = i

    logger.debug("Cross-validation scores", extra={"grid": list(param_grid), "scores": scores})
    return CrossValidationResult(best_params=dict(param_grid[best]), best_score=scores[best], scores=scores)
