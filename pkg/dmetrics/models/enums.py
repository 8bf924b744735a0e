from enum import Enum


class FactorKind(str, Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"


class ImportanceSource(str, Enum):
    MUTUAL_INFORMATION = "mutual-information"
    LASSO = "lasso"
    RANDOM_FOREST = "random-forest"
    # SAP: single-dimension R², balanced tree accuracy for categorical factors
    R_SQUARED = "r-squared"


class Property(str, Enum):
    MODULARITY = "modularity"
    COMPACTNESS = "compactness"
    EXPLICITNESS = "explicitness"
    HOLISTIC = "holistic"


class BinningStrategy(str, Enum):
    EQUAL_WIDTH_EMPIRICAL = "equal-width-empirical"
    EQUAL_WIDTH_FIXED = "equal-width-fixed"


class DciBackend(str, Enum):
    LASSO = "lasso"
    RANDOM_FOREST = "random-forest"


class IrsDistance(str, Enum):
    PER_DIMENSION = "per-dimension"
    L2 = "l2"


class Generator(str, Enum):
    NOISE_MIX = "noise-mix"
    ROTATION = "rotation"
    ANGLE_TRIG = "angle-trig"
    REDUNDANT = "redundant"
    TANGENT = "tangent"
    HIDDEN_FACTORS = "hidden-factors"


class ExperimentName(str, Enum):
    NOISE = "noise"
    ROTATION = "rotation"
    ANGLES = "angles"
    TANGENT = "tangent"
    HIDDEN = "hidden"


class Profile(str, Enum):
    DESK = "desk"
    PAPER = "paper"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class MetricName(str, Enum):
    """Registered metric identifiers, in report column order."""

    Z_DIFF = "z-diff"
    Z_MIN = "z-min-variance"
    Z_MAX = "z-max-variance"
    IRS = "irs"
    DCI_LASSO = "dci-lasso"
    DCI_RF = "dci-rf"
    EXPLICITNESS_SCORE = "explicitness-score"
    SAP = "sap"
    MIG = "mig-rmig"
    MIG_SUP = "mig-sup"
    JEMMIG = "jemmig"
    MODULARITY_SCORE = "modularity-score"
    DCIMIG = "dcimig"
