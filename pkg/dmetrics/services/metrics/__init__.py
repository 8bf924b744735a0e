from dmetrics.services.metrics.information import dcimig, jemmig, mig, mig_sup, modularity_score
from dmetrics.services.metrics.intervention import irs, z_diff, z_max_variance, z_min_variance
from dmetrics.services.metrics.predictor import dci, explicitness_score, sap

__all__ = [
    "dci",
    "dcimig",
    "explicitness_score",
    "irs",
    "jemmig",
    "mig",
    "mig_sup",
    "modularity_score",
    "sap",
    "z_diff",
    "z_max_variance",
    "z_min_variance",
]
