from dmetrics.models.data import CodeMatrix, FactorMatrix, ImportanceMatrix, JointHistogram
from dmetrics.models.reports import DciReport, MetricReport

__all__ = ["CodeMatrix", "DciReport", "FactorMatrix", "ImportanceMatrix", "JointHistogram", "MetricReport"]
