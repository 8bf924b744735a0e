"""Predictor-based metrics: DCI (lasso / random forest), Explicitness Score and SAP."""

import logging
import math

import numpy as np

from dmetrics.core.errors import SingleClassError
from dmetrics.models.data import CodeMatrix, FactorMatrix, ImportanceMatrix
from dmetrics.models.enums import DciBackend, FactorKind, ImportanceSource, MetricName, Property
from dmetrics.models.reports import DciReport, MetricReport
from dmetrics.models.schemas.params import BinningSpec, DciParams, ExplicitnessParams, SapParams
from dmetrics.services.discretize import discretize_factors
from dmetrics.services.metrics.information import top_two
from dmetrics.services.predictors.evaluation import (
    balanced_accuracy,
    cross_validate,
    mse,
    roc_auc,
    train_test_split,
)
from dmetrics.services.predictors.forest import fit_forest
from dmetrics.services.predictors.lasso import fit_lasso
from dmetrics.services.predictors.logistic import fit_logistic_ovr, fit_softmax
from dmetrics.services.validator import validate_pair

logger = logging.getLogger(__name__)

TARGET_SCALE = math.sqrt(6.0)


def factor_seed(seed: int, i: int) -> int:
    """Independent seed for the per-factor fit ``i``."""
    return int(np.random.SeedSequence([seed, i]).generate_state(1)[0])


# --- DCI ---


def weighted_entropy_score(p: np.ndarray, base: int) -> float:
    """1 + sum p log_base p, with base 1 meaning a single outcome (score 1)."""
    if base <= 1:
        return 1.0
    nz = p[p > 0]
    return float(1.0 + np.sum(nz * np.log(nz)) / math.log(base))


def _lasso_fitter(params: DciParams):
    def fit(X, y, lam):
        return fit_lasso(X, y, lam, tol=params.lasso_tol, max_sweeps=params.lasso_max_sweeps)

    return fit


def _forest_fitter(params: DciParams, seed: int, d: int):
    per_split = params.features_per_split or math.ceil(math.sqrt(d))

    def fit(X, y, max_depth):
        return fit_forest(
            X,
            y,
            num_trees=params.num_trees,
            max_depth=max_depth,
            min_leaf=params.min_leaf,
            features_per_split=per_split,
            seed=seed,
        )

    return fit


def _negative_mse(model, X, y) -> float:
    return -mse(model.predict(X), y)


def _fit_factor(
    z: np.ndarray, y: np.ndarray, backend: DciBackend, params: DciParams, seed: int
) -> tuple[np.ndarray, float, dict, list[str]]:
    """Fit one factor; returns (importance row, explicitness, chosen params, flags)."""
    rng = np.random.default_rng(seed)
    train, test = train_test_split(z.shape[0], params.test_fraction, rng)
    spread = float(y[train].std())
    if spread <= 0:
        return np.zeros(z.shape[1]), 0.0, {}, ["constant target on the training split"]
    # Variance 1/6 on the training split, so 1 - 6·MSE is the held-out R²
    y_norm = (y - float(y[train].mean())) / (spread * TARGET_SCALE)

    if backend == DciBackend.LASSO:
        fitter = _lasso_fitter(params)
        grid = [{"lam": lam} for lam in params.lasso_grid]
    else:
        fitter = _forest_fitter(params, seed, z.shape[1])
        grid = [{"max_depth": depth} for depth in params.forest_depths]

    cv_rows = train
    if cv_rows.shape[0] > params.cv_max_samples:
        cv_rows = np.sort(rng.choice(train, size=params.cv_max_samples, replace=False))
    flags: list[str] = []
    if len(grid) > 1:
        cv = cross_validate(fitter, z[cv_rows], y_norm[cv_rows], params.cv_folds, grid, _negative_mse, seed=seed)
        chosen = cv.best_params
    else:
        chosen = dict(grid[0])

    model = fitter(z[train], y_norm[train], **chosen)
    importance = model.importances
    if backend == DciBackend.LASSO and not model.converged:
        flags.append(f"lasso did not converge after {model.n_sweeps} sweeps")

    explicit = float(np.clip(1.0 - 6.0 * mse(model.predict(z[test]), y_norm[test]), 0.0, 1.0))
    return np.asarray(importance, dtype=np.float64), explicit, chosen, flags


def dci_from_importance(weights: np.ndarray) -> tuple[list[float], list[float], list[float], list[str]]:
    """
    Compactness per factor, modularity per code and code relevance from R.

    An all-zero factor row scores compactness 0 and is flagged.
    """
    weights = np.asarray(weights, dtype=np.float64)
    m, d = weights.shape
    flags: list[str] = []

    compactness: list[float] = []
    for i, row in enumerate(weights):
        total = row.sum()
        if total <= 0:
            flags.append(f"factor {i} has no important code dimension")
            compactness.append(0.0)
            continue
        compactness.append(float(np.clip(weighted_entropy_score(row / total, d), 0.0, 1.0)))

    modularity: list[float] = []
    for j in range(d):
        col = weights[:, j]
        total = col.sum()
        modularity.append(
            float(np.clip(weighted_entropy_score(col / total, m), 0.0, 1.0)) if total > 0 else 0.0
        )

    relevance = weights.sum(axis=0)
    grand = relevance.sum()
    rho = (relevance / grand).tolist() if grand > 0 else [0.0] * d
    return compactness, modularity, rho, flags


def dci(
    factors: FactorMatrix,
    codes: CodeMatrix,
    backend: DciBackend,
    cv_params: DciParams | None = None,
    seed: int = 0,
) -> DciReport:
    """
    Disentanglement (modularity), completeness (compactness) and
    informativeness (explicitness) from one predictor per factor.
    """
    validate_pair(factors, codes)
    params = cv_params or DciParams()
    z = codes.values
    m = factors.n_factors

    rows = []
    explicitness = []
    chosen: list[dict] = []
    flags: list[str] = []
    for i in range(m):
        importance, explicit, best, fit_flags = _fit_factor(z, factors.column(i), backend, params, factor_seed(seed, i))
        rows.append(importance)
        explicitness.append(explicit)
        chosen.append(best)
        flags.extend(f"factor {i}: {flag}" for flag in fit_flags)

    weights = np.vstack(rows)
    compactness, modularity, rho, importance_flags = dci_from_importance(weights)
    flags.extend(importance_flags)
    for flag in flags:
        logger.warning("DCI %s: %s", backend.value, flag)

    grand = sum(rho)
    return DciReport(
        modularity=float(np.average(modularity, weights=rho)) if grand > 0 else 0.0,
        compactness=float(np.mean(compactness)),
        explicitness=float(np.mean(explicitness)),
        importance=ImportanceMatrix(
            weights=weights,
            source=ImportanceSource.LASSO if backend == DciBackend.LASSO else ImportanceSource.RANDOM_FOREST,
        ),
        backend=backend,
        per_code_modularity=modularity,
        code_relevance=rho,
        per_factor_compactness=compactness,
        per_factor_explicitness=explicitness,
        seed=seed,
        flags=flags,
        params={**params.model_dump(mode="json"), "selected": chosen},
    )


# --- Explicitness Score ---


def explicitness_score(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: ExplicitnessParams | None = None,
    factor_bins: BinningSpec | None = None,
    seed: int = 0,
) -> MetricReport:
    """
    Mean ROCAUC of linear classifiers predicting each (binned) factor from the
    full code, mapped from [0.5, 1] to [0, 1].

    By default one logistic model is trained per class (one-vs-rest) and each
    class is ranked by its probability normalized over all classes;
    ``multinomial`` swaps in a single softmax model.
    """
    validate_pair(factors, codes)
    params = params or ExplicitnessParams()
    labels, _ = discretize_factors(factors, factor_bins or BinningSpec())
    z = codes.values

    flags: list[str] = []
    per_factor: list[float] = []
    for i in range(factors.n_factors):
        y = labels[:, i]
        if np.unique(y).shape[0] < 2:
            raise SingleClassError(f"Factor '{factors.factor_names[i]}' has a single class after binning")

        if params.test_fraction > 0:
            train, test = train_test_split(y.shape[0], params.test_fraction, np.random.default_rng(factor_seed(seed, i)))
        else:
            train = test = np.arange(y.shape[0])

        fit = fit_softmax if params.multinomial else fit_logistic_ovr
        model = fit(z[train], y[train], l2=params.l2, epochs=params.epochs, balanced=params.balanced)
        probs = model.predict_proba(z[test])
        aucs = []
        for k, cls in enumerate(model.classes):
            positives = y[test] == cls
            if positives.all() or not positives.any():
                flags.append(f"factor {i} class {int(cls)} missing from one side of the split")
                continue
            aucs.append(roc_auc(probs[:, k], positives))
        unseen = np.setdiff1d(np.unique(y[test]), model.classes)
        if unseen.size:
            flags.append(f"factor {i} classes {unseen.tolist()} absent from training rows")
        if not aucs:
            raise SingleClassError(f"Factor '{factors.factor_names[i]}' has no class evaluable on held-out rows")
        per_factor.append(float(np.clip((np.mean(aucs) - 0.5) / 0.5, 0.0, 1.0)))

    for flag in flags:
        logger.warning("Explicitness score: %s", flag)
    return MetricReport(
        metric_name=MetricName.EXPLICITNESS_SCORE.value,
        property=Property.EXPLICITNESS,
        overall=float(np.mean(per_factor)),
        per_factor=per_factor,
        aggregate="factor",
        seed=seed,
        flags=flags,
        params=params.model_dump(mode="json"),
    )


# --- SAP ---


def _squared_correlation(v: np.ndarray, z: np.ndarray) -> float:
    """R² of the 1-feature least-squares fit of v on z."""
    vc = v - v.mean()
    zc = z - z.mean()
    denom = float((vc @ vc) * (zc @ zc))
    return float((vc @ zc) ** 2 / denom) if denom > 0 else 0.0


def _tree_score(z: np.ndarray, y: np.ndarray, params: SapParams, seed: int) -> float:
    """Held-out balanced accuracy of a depth-tuned single tree on one code dimension."""
    rng = np.random.default_rng(seed)
    train, test = train_test_split(y.shape[0], params.test_fraction, rng)
    X = z.reshape(-1, 1)

    def fit(X_, y_, max_depth):
        return fit_forest(
            X_,
            y_,
            num_trees=1,
            max_depth=max_depth,
            min_leaf=params.min_leaf,
            seed=seed,
            mode="classification",
            bootstrap=False,
        )

    def score(model, X_, y_):
        return balanced_accuracy(model.predict(X_), y_)

    grid = [{"max_depth": depth} for depth in params.tree_depths]
    best = grid[0]
    if len(grid) > 1 and train.shape[0] >= params.cv_folds:
        best = cross_validate(fit, X[train], y[train], params.cv_folds, grid, score, seed=seed).best_params
    model = fit(X[train], y[train], **best)
    return score(model, X[test], y[test])


def sap(factors: FactorMatrix, codes: CodeMatrix, params: SapParams | None = None, seed: int = 0) -> MetricReport:
    """Mean over factors of the gap between the two most predictive single code dimensions."""
    validate_pair(factors, codes)
    params = params or SapParams()
    z = codes.values
    m, d = factors.n_factors, codes.n_dims

    dead = z.var(axis=0) < params.dead_code_threshold
    flags = [f"code {j} is dead (variance below {params.dead_code_threshold})" for j in np.flatnonzero(dead)]

    scores = np.zeros((m, d))
    for i in range(m):
        v = factors.column(i)
        categorical = factors.kinds[i] == FactorKind.CATEGORICAL
        if categorical and np.unique(v).shape[0] < 2:
            flags.append(f"factor {i} has a single class")
            continue
        for j in range(d):
            if dead[j]:
                continue
            if categorical:
                scores[i, j] = _tree_score(z[:, j], v.astype(np.int64), params, factor_seed(seed, i * d + j))
            else:
                scores[i, j] = _squared_correlation(v, z[:, j])

    predictability = ImportanceMatrix(weights=scores, source=ImportanceSource.R_SQUARED)
    per_factor = []
    for row in predictability.weights:
        _, first, second = top_two(row)
        per_factor.append(first - second)

    for flag in flags:
        logger.warning("SAP: %s", flag)
    return MetricReport(
        metric_name=MetricName.SAP.value,
        property=Property.COMPACTNESS,
        overall=float(np.mean(per_factor)),
        per_factor=per_factor,
        aggregate="factor",
        seed=seed,
        flags=flags,
        params=params.model_dump(mode="json"),
        details={"score_matrix": predictability.weights.tolist(), "score_source": predictability.source.value},
    )
