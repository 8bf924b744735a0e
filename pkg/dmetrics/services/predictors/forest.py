"""Decision trees and random forests with impurity-decrease importances.

Trees are stored as flat node arrays. Regression splits minimize the summed
squared error (variance reduction), classification splits minimize Gini
impurity. Samples go left when ``x <= threshold``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from dmetrics.core.errors import InsufficientDataError, ShapeMismatchError

logger = logging.getLogger(__name__)

Mode = Literal["regression", "classification"]
LEAF = -1


@dataclass(frozen=True)
class TreeModel:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    # regression: (nodes,) means; classification: (nodes, K) class frequencies
    value: np.ndarray
    # raw impurity decrease (node size weighted) per feature
    gains: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    @property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] != LEAF:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] != LEAF
        return node

    def predict_value(self, X: np.ndarray) -> np.ndarray:
        return self.value[self.apply(X)]


@dataclass(frozen=True)
class ForestModel:
    trees: list[TreeModel]
    importances: np.ndarray
    mode: Mode
    n_features: int
    classes: np.ndarray | None = None
    degenerate: bool = False
    params: dict = field(default_factory=dict)

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeMismatchError(f"Forest expects {self.n_features} features, got shape {X.shape}")
        return X

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if self.mode != "classification":
            raise ValueError("predict_proba is only defined for classification forests")
        X = self._check(X)
        return np.mean([tree.predict_value(X) for tree in self.trees], axis=0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = self._check(X)
        if self.mode == "regression":
            return np.mean([tree.predict_value(X) for tree in self.trees], axis=0)
        assert self.classes is not None
        return self.classes[np.argmax(self.predict_proba(X), axis=1)]


def _best_split(
    x: np.ndarray, y: np.ndarray, mode: Mode, n_classes: int, min_leaf: int
) -> tuple[float, float] | None:
    """Best (impurity decrease, threshold) on one feature, or None if no admissible split."""
    n = x.shape[0]
    order = np.argsort(x, kind="stable")
    xs = x[order]
    # candidate k puts the first k sorted samples on the left
    k = np.arange(1, n)
    admissible = (xs[1:] > xs[:-1]) & (k >= min_leaf) & (n - k >= min_leaf)
    if not admissible.any():
        return None

    if mode == "regression":
        ys = y[order]
        csum = np.cumsum(ys)[:-1]
        csq = np.cumsum(ys * ys)[:-1]
        total, total_sq = csum[-1] + ys[-1], csq[-1] + ys[-1] ** 2
        sse_left = csq - csum**2 / k
        sse_right = (total_sq - csq) - (total - csum) ** 2 / (n - k)
        parent = total_sq - total**2 / n
        gain = parent - (sse_left + sse_right)
    else:
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y[order].astype(np.int64)] = 1.0
        left_counts = np.cumsum(onehot, axis=0)[:-1]
        totals = left_counts[-1] + onehot[-1]
        right_counts = totals - left_counts
        gini_left = k - (left_counts**2).sum(axis=1) / k
        gini_right = (n - k) - (right_counts**2).sum(axis=1) / (n - k)
        parent = n - (totals**2).sum() / n
        gain = parent - (gini_left + gini_right)

    gain = np.where(admissible, gain, -np.inf)
    best = int(np.argmax(gain))
    if not gain[best] > 1e-12:
        return None
    return float(gain[best]), float((xs[best] + xs[best + 1]) / 2.0)


def _leaf_value(y: np.ndarray, mode: Mode, n_classes: int) -> np.ndarray:
    if mode == "regression":
        return np.array(y.mean())
    return np.bincount(y.astype(np.int64), minlength=n_classes) / y.shape[0]


def _is_pure(y: np.ndarray) -> bool:
    return bool(y.shape[0] == 0 or np.all(y == y[0]))


def fit_tree(
    X: np.ndarray,
    y: np.ndarray,
    rng: np.random.Generator,
    mode: Mode = "regression",
    max_depth: int | None = None,
    min_leaf: int = 1,
    features_per_split: int | None = None,
    n_classes: int = 0,
) -> TreeModel:
    """Grow one tree. Classification labels must already be encoded as 0..n_classes-1."""
    n, d = X.shape
    k_features = min(features_per_split or d, d)

    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    value: list[np.ndarray] = []
    gains = np.zeros(d)

    def new_node(idx: np.ndarray) -> int:
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        value.append(_leaf_value(y[idx], mode, n_classes))
        return len(feature) - 1

    stack = [(new_node(np.arange(n)), np.arange(n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        if (max_depth is not None and depth >= max_depth) or idx.shape[0] < 2 * min_leaf or _is_pure(y[idx]):
            continue

        candidates = rng.choice(d, size=k_features, replace=False) if k_features < d else np.arange(d)
        best: tuple[float, int, float] | None = None
        for f in candidates:
            found = _best_split(X[idx, f], y[idx], mode, n_classes, min_leaf)
            if found is not None and (best is None or found[0] > best[0]):
                best = (found[0], int(f), found[1])
        if best is None:
            continue

        gain, f, thr = best
        gains[f] += gain
        mask = X[idx, f] <= thr
        left_idx, right_idx = idx[mask], idx[~mask]
        feature[node] = f
        threshold[node] = thr
        left[node] = new_node(left_idx)
        right[node] = new_node(right_idx)
        stack.append((right[node], right_idx, depth + 1))
        stack.append((left[node], left_idx, depth + 1))

    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        value=np.array(value),
        gains=gains,
    )


def fit_forest(
    X: np.ndarray,
    y: np.ndarray,
    num_trees: int = 10,
    max_depth: int | None = None,
    min_leaf: int = 5,
    features_per_split: int | None = None,
    seed: int = 0,
    mode: Mode = "regression",
    bootstrap: bool = True,
) -> ForestModel:
    """
    Fit a random forest.

    ``features_per_split`` defaults to ceil(sqrt(d)). Importances are the
    impurity decrease per feature, normalized per tree, averaged over trees and
    normalized to sum 1 (all zero when no tree split).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).ravel()
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeMismatchError(f"X has shape {X.shape} but y has {y.shape[0]} rows")
    n, d = X.shape
    if n < 2:
        raise InsufficientDataError("A forest needs at least 2 samples")

    params = {
        "num_trees": num_trees,
        "max_depth": max_depth,
        "min_leaf": min_leaf,
        "features_per_split": features_per_split or math.ceil(math.sqrt(d)),
        "bootstrap": bootstrap,
        "seed": seed,
    }

    classes = None
    target = y.astype(np.float64)
    n_classes = 0
    if mode == "classification":
        classes, target = np.unique(y, return_inverse=True)
        n_classes = int(classes.shape[0])

    if _is_pure(target):
        logger.warning("Constant target, returning a stump with zero importances", extra={"mode": mode})
        stump = fit_tree(X, target, np.random.default_rng(seed), mode, max_depth=0, n_classes=n_classes)
        return ForestModel(
            trees=[stump],
            importances=np.zeros(d),
            mode=mode,
            n_features=d,
            classes=classes,
            degenerate=True,
            params=params,
        )

    tree_rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(num_trees)]
    trees: list[TreeModel] = []
    per_tree: list[np.ndarray] = []
    for rng in tree_rngs:
        rows = rng.integers(0, n, size=n) if bootstrap else np.arange(n)
        tree = fit_tree(
            X[rows],
            target[rows],
            rng,
            mode,
            max_depth=max_depth,
            min_leaf=min_leaf,
            features_per_split=params["features_per_split"],
            n_classes=n_classes,
        )
        trees.append(tree)
        total = tree.gains.sum()
        per_tree.append(tree.gains / total if total > 0 else np.zeros(d))

    importances = np.mean(per_tree, axis=0)
    if importances.sum() > 0:
        importances = importances / importances.sum()

    return ForestModel(
        trees=trees, importances=importances, mode=mode, n_features=d, classes=classes, params=params
    )
