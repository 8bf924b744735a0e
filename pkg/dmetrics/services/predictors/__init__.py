from dmetrics.services.predictors.evaluation import (
    CrossValidationResult,
    balanced_accuracy,
    cross_validate,
    mse,
    predict,
    roc_auc,
)
from dmetrics.services.predictors.forest import ForestModel, TreeModel, fit_forest, fit_tree
from dmetrics.services.predictors.lasso import LassoModel, fit_lasso
from dmetrics.services.predictors.logistic import LogisticModel, fit_logistic_ovr, fit_softmax

__all__ = [
    "CrossValidationResult",
    "ForestModel",
    "LassoModel",
    "LogisticModel",
    "TreeModel",
    "balanced_accuracy",
    "cross_validate",
    "fit_forest",
    "fit_logistic_ovr",
    "fit_lasso",
    "fit_softmax",
    "fit_tree",
    "mse",
    "predict",
    "roc_auc",
]
