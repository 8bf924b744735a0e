"""Lasso regression by cyclic coordinate descent.

Minimizes (1/2N)·||y - Xw - b||² + λ·||w||₁ on standardized features with a
centered target, then maps the weights back to the original feature scale.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from dmetrics.core.errors import InsufficientDataError, ShapeMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LassoModel:
    weights: np.ndarray  # original feature scale
    intercept: float
    lam: float
    # |w| on the standardized scale, used as importance
    standardized_weights: np.ndarray
    converged: bool = True
    n_sweeps: int = 0
    objective_history: list[float] = field(default_factory=list)

    @property
    def n_features(self) -> int:
        return int(self.weights.shape[0])

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeMismatchError(f"Lasso model expects {self.n_features} features, got shape {X.shape}")
        return X @ self.weights + self.intercept

    @property
    def importances(self) -> np.ndarray:
        return np.abs(self.standardized_weights)


def soft_threshold(rho: float, lam: float) -> float:
    if rho > lam:
        return rho - lam
    if rho < -lam:
        return rho + lam
    return 0.0


def _objective(residual: np.ndarray, w: np.ndarray, lam: float) -> float:
    n = residual.shape[0]
    return float(residual @ residual / (2 * n) + lam * np.abs(w).sum())


def fit_lasso(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = 1e-6,
    max_sweeps: int = 1000,
    standardize: bool = True,
) -> LassoModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeMismatchError(f"X has shape {X.shape} but y has {y.shape[0]} rows")
    n, d = X.shape
    if n < 2:
        raise InsufficientDataError("Lasso needs at least 2 samples")
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")

    mu = X.mean(axis=0)
    scale = X.std(axis=0) if standardize else np.ones(d)
    live = scale > 0
    scale = np.where(live, scale, 1.0)
    Xs = (X - mu) / scale
    Xs[:, ~live] = 0.0
    y_mean = float(y.mean())
    yc = y - y_mean

    col_sq = (Xs * Xs).sum(axis=0) / n
    w = np.zeros(d)
    residual = yc.copy()
    history = [_objective(residual, w, lam)]
    converged = False
    sweeps = 0

    for sweeps in range(1, max_sweeps + 1):
        max_delta = 0.0
        for j in range(d):
            if col_sq[j] == 0.0:
                continue
            old = w[j]
            rho = Xs[:, j] @ residual / n + col_sq[j] * old
            new = soft_threshold(rho, lam) / col_sq[j]
            if new != old:
                residual -= Xs[:, j] * (new - old)
                w[j] = new
                max_delta = max(max_delta, abs(new - old))
        history.append(_objective(residual, w, lam))
        if max_delta < tol:
            converged = True
            break

    if not converged:
        logger.warning("Lasso did not converge", extra={"lam": lam, "sweeps": sweeps, "tol": tol})

    weights = w / scale
    intercept = y_mean - float(mu @ weights)
    return LassoModel(
        weights=weights,
        intercept=intercept,
        lam=lam,
        standardized_weights=w,
        converged=converged,
        n_sweeps=sweeps,
        objective_history=history,
    )
