"""Linear classifiers trained by full-batch gradient descent.

Two flavors share one model type: one-vs-rest binary logistic regressions
(optionally class-balanced) and a multinomial softmax regression. Features are
standardized internally; the step size is 1/L for the smoothness constant L of
the loss, so training is deterministic and needs no tuning.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import expit, softmax

from dmetrics.core.errors import ShapeMismatchError, SingleClassError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray  # K x d, standardized feature scale
    intercepts: np.ndarray  # K
    classes: np.ndarray
    class_weights: np.ndarray  # per-class loss weight (positive side for OvR), 1 when unbalanced
    mean: np.ndarray
    scale: np.ndarray
    multinomial: bool = False

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[1])

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeMismatchError(f"Classifier expects {self.n_features} features, got shape {X.shape}")
        return ((X - self.mean) / self.scale) @ self.weights.T + self.intercepts

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision_function(X)
        if self.multinomial:
            return softmax(scores, axis=1)
        probs = expit(scores)
        return probs / np.maximum(probs.sum(axis=1, keepdims=True), 1e-300)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.classes[np.argmax(self.decision_function(X), axis=1)]


def _prepare(X: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels).ravel()
    if X.ndim != 2 or X.shape[0] != labels.shape[0]:
        raise ShapeMismatchError(f"X has shape {X.shape} but labels have {labels.shape[0]} rows")
    classes, encoded = np.unique(labels, return_inverse=True)
    if classes.shape[0] < 2:
        raise SingleClassError(f"Need at least 2 classes, got {classes.tolist()}")
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return (X - mean) / scale, encoded, classes, mean, scale


def _step_size(Xa: np.ndarray, curvature: float, l2: float) -> float:
    n = Xa.shape[0]
    lipschitz = curvature * float(np.linalg.eigvalsh(Xa.T @ Xa / n)[-1]) + l2
    return 1.0 / lipschitz


def fit_logistic_ovr(
    X: np.ndarray,
    labels: np.ndarray,
    l2: float = 1e-4,
    epochs: int = 300,
    lr: float | None = None,
    balanced: bool = True,
) -> LogisticModel:
    """
    One binary logistic regression per class, trained jointly.

    With ``balanced`` each binary problem weights positives by N/(2·n_pos) and
    negatives by N/(2·n_neg).
    """
    Xs, encoded, classes, mean, scale = _prepare(X, labels)
    n, d = Xs.shape
    k = classes.shape[0]
    Xa = np.hstack([Xs, np.ones((n, 1))])

    targets = (encoded[:, None] == np.arange(k)[None, :]).astype(np.float64)
    if balanced:
        n_pos = targets.sum(axis=0)
        pos_w = n / (2.0 * n_pos)
        neg_w = n / (2.0 * (n - n_pos))
        sample_w = np.where(targets > 0, pos_w, neg_w)
    else:
        pos_w = np.ones(k)
        sample_w = np.ones((n, k))

    step = lr or _step_size(Xa, 0.25 * float(sample_w.max()), l2)
    W = np.zeros((d + 1, k))
    penalty = np.ones((d + 1, 1))
    penalty[-1] = 0.0
    for _ in range(epochs):
        resid = sample_w * (expit(Xa @ W) - targets)
        W -= step * (Xa.T @ resid / n + l2 * penalty * W)

    return LogisticModel(
        weights=W[:-1].T.copy(),
        intercepts=W[-1].copy(),
        classes=classes,
        class_weights=np.asarray(pos_w, dtype=np.float64),
        mean=mean,
        scale=scale,
    )


def fit_softmax(
    X: np.ndarray,
    labels: np.ndarray,
    l2: float = 1e-4,
    epochs: int = 300,
    lr: float | None = None,
    balanced: bool = False,
) -> LogisticModel:
    """Multinomial logistic regression; ``balanced`` weights each sample by N/(K·n_class)."""
    Xs, encoded, classes, mean, scale = _prepare(X, labels)
    n, d = Xs.shape
    k = classes.shape[0]
    Xa = np.hstack([Xs, np.ones((n, 1))])
    targets = (encoded[:, None] == np.arange(k)[None, :]).astype(np.float64)
    counts = np.bincount(encoded, minlength=k)
    class_w = n / (k * counts) if balanced else np.ones(k)
    sample_w = class_w[encoded][:, None]

    step = lr or _step_size(Xa, 0.5 * float(class_w.max()), l2)
    W = np.zeros((d + 1, k))
    penalty = np.ones((d + 1, 1))
    penalty[-1] = 0.0
    for _ in range(epochs):
        resid = sample_w * (softmax(Xa @ W, axis=1) - targets)
        W -= step * (Xa.T @ resid / n + l2 * penalty * W)

    return LogisticModel(
        weights=W[:-1].T.copy(),
        intercepts=W[-1].copy(),
        classes=classes,
        class_weights=class_w,
        mean=mean,
        scale=scale,
        multinomial=True,
    )
