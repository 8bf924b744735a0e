"""Name -> implementation table used by the runner and the CLI."""

from collections.abc import Callable
from dataclasses import dataclass

from dmetrics.core.errors import ConfigError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import DciBackend, MetricName, Property
from dmetrics.models.reports import MetricReport
from dmetrics.models.schemas.params import MetricParams
from dmetrics.services.infotheory import InformationTables, information_tables
from dmetrics.services.metrics import information, intervention, predictor


@dataclass(frozen=True)
class MetricContext:
    factors: FactorMatrix
    codes: CodeMatrix
    params: MetricParams
    seed: int
    _tables: InformationTables | None = None

    @property
    def tables(self) -> InformationTables:
        if self._tables is not None:
            return self._tables
        return information_tables(self.factors, self.codes, self.params.factor_bins, self.params.code_bins)


Runner = Callable[[MetricContext], list[MetricReport]]


def _binning_params(ctx: MetricContext) -> dict:
    return {
        "factor_bins": ctx.params.factor_bins.model_dump(mode="json"),
        "code_bins": ctx.params.code_bins.model_dump(mode="json"),
    }


def _with_params(report: MetricReport, extra: dict) -> MetricReport:
    return report.model_copy(update={"params": {**report.params, **extra}})


def _z_diff(ctx: MetricContext) -> list[MetricReport]:
    report = intervention.z_diff(ctx.factors, ctx.codes, ctx.params.intervention, ctx.params.factor_bins, ctx.seed)
    return [_with_params(report, _binning_params(ctx))]


def _z_min(ctx: MetricContext) -> list[MetricReport]:
    report = intervention.z_min_variance(
        ctx.factors, ctx.codes, ctx.params.intervention, ctx.params.factor_bins, ctx.seed
    )
    return [_with_params(report, _binning_params(ctx))]


def _z_max(ctx: MetricContext) -> list[MetricReport]:
    report = intervention.z_max_variance(
        ctx.factors, ctx.codes, ctx.params.intervention, ctx.params.factor_bins, ctx.seed
    )
    return [_with_params(report, _binning_params(ctx))]


def _irs(ctx: MetricContext) -> list[MetricReport]:
    report = intervention.irs(
        ctx.factors, ctx.codes, ctx.params.intervention, ctx.params.factor_bins, ctx.params.code_bins, ctx.seed
    )
    return [_with_params(report, _binning_params(ctx))]


def _dci(backend: DciBackend, prefix: str) -> Runner:
    def run(ctx: MetricContext) -> list[MetricReport]:
        return predictor.dci(ctx.factors, ctx.codes, backend, ctx.params.dci, ctx.seed).to_reports(prefix)

    return run


def _explicitness(ctx: MetricContext) -> list[MetricReport]:
    report = predictor.explicitness_score(
        ctx.factors, ctx.codes, ctx.params.explicitness, ctx.params.factor_bins, ctx.seed
    )
    return [_with_params(report, _binning_params(ctx))]


def _sap(ctx: MetricContext) -> list[MetricReport]:
    return [predictor.sap(ctx.factors, ctx.codes, ctx.params.sap, ctx.seed)]


def _mig(ctx: MetricContext) -> list[MetricReport]:
    t = ctx.tables
    return [_with_params(information.mig(t.mi, t.factor_entropies, ctx.seed), _binning_params(ctx))]


def _mig_sup(ctx: MetricContext) -> list[MetricReport]:
    t = ctx.tables
    return [_with_params(information.mig_sup(t.mi, t.factor_entropies, ctx.seed), _binning_params(ctx))]


def _jemmig(ctx: MetricContext) -> list[MetricReport]:
    t = ctx.tables
    report = information.jemmig(t.mi, t.joint_entropies, t.factor_entropies, t.num_code_bins, ctx.seed)
    return [_with_params(report, _binning_params(ctx))]


def _modularity(ctx: MetricContext) -> list[MetricReport]:
    return [_with_params(information.modularity_score(ctx.tables.mi, ctx.seed), _binning_params(ctx))]


def _dcimig(ctx: MetricContext) -> list[MetricReport]:
    t = ctx.tables
    return [_with_params(information.dcimig(t.mi, t.factor_entropies, ctx.seed), _binning_params(ctx))]


METRICS: dict[MetricName, Runner] = {
    MetricName.Z_DIFF: _z_diff,
    MetricName.Z_MIN: _z_min,
    MetricName.Z_MAX: _z_max,
    MetricName.IRS: _irs,
    MetricName.DCI_LASSO: _dci(DciBackend.LASSO, "dci-lasso"),
    MetricName.DCI_RF: _dci(DciBackend.RANDOM_FOREST, "dci-rf"),
    MetricName.EXPLICITNESS_SCORE: _explicitness,
    MetricName.SAP: _sap,
    MetricName.MIG: _mig,
    MetricName.MIG_SUP: _mig_sup,
    MetricName.JEMMIG: _jemmig,
    MetricName.MODULARITY_SCORE: _modularity,
    MetricName.DCIMIG: _dcimig,
}

# Report rows produced by each metric (DCI yields one row per property)
OUTPUT_NAMES: dict[MetricName, list[tuple[str, Property]]] = {
    MetricName.Z_DIFF: [("z-diff", Property.HOLISTIC)],
    MetricName.Z_MIN: [("z-min-variance", Property.HOLISTIC)],
    MetricName.Z_MAX: [("z-max-variance", Property.HOLISTIC)],
    MetricName.IRS: [("irs", Property.MODULARITY)],
    MetricName.DCI_LASSO: [
        ("dci-lasso-modularity", Property.MODULARITY),
        ("dci-lasso-compactness", Property.COMPACTNESS),
        ("dci-lasso-explicitness", Property.EXPLICITNESS),
    ],
    MetricName.DCI_RF: [
        ("dci-rf-modularity", Property.MODULARITY),
        ("dci-rf-compactness", Property.COMPACTNESS),
        ("dci-rf-explicitness", Property.EXPLICITNESS),
    ],
    MetricName.EXPLICITNESS_SCORE: [("explicitness-score", Property.EXPLICITNESS)],
    MetricName.SAP: [("sap", Property.COMPACTNESS)],
    MetricName.MIG: [("mig-rmig", Property.COMPACTNESS)],
    MetricName.MIG_SUP: [("mig-sup", Property.MODULARITY)],
    MetricName.JEMMIG: [("jemmig", Property.HOLISTIC)],
    MetricName.MODULARITY_SCORE: [("modularity-score", Property.MODULARITY)],
    MetricName.DCIMIG: [("dcimig", Property.HOLISTIC)],
}

INFORMATION_METRICS = {
    MetricName.MIG,
    MetricName.MIG_SUP,
    MetricName.JEMMIG,
    MetricName.MODULARITY_SCORE,
    MetricName.DCIMIG,
}


def resolve(name: str | MetricName) -> Runner:
    try:
        return METRICS[MetricName(name)]
    except ValueError as e:
        known = ", ".join(m.value for m in MetricName)
        raise ConfigError(f"Unknown metric '{name}'. Known metrics: {known}") from e


def output_columns(names: list[MetricName] | None = None) -> list[tuple[str, Property]]:
    """Report rows in canonical order for the selected metrics."""
    selected = set(names) if names is not None else set(MetricName)
    return [col for name in MetricName if name in selected for col in OUTPUT_NAMES[name]]
