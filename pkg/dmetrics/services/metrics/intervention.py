"""Intervention-based metrics: Z-diff, Z-min Variance, Z-max Variance and IRS.

A factor is "fixed" when its bin is fixed. Subsets are built by picking an
anchor sample uniformly, which weights bins by their frequency, and drawing the
rest of the subset from the anchor's stratum.
"""

import logging
from dataclasses import dataclass

import numpy as np

from dmetrics.core.errors import InsufficientSamplesError, MetricComputationError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import IrsDistance, MetricName, Property
from dmetrics.models.reports import MetricReport
from dmetrics.models.schemas.params import BinningSpec, InterventionParams
from dmetrics.services.discretize import discretize_factors
from dmetrics.services.infotheory import information_tables
from dmetrics.services.predictors.evaluation import accuracy
from dmetrics.services.predictors.logistic import fit_softmax
from dmetrics.services.validator import rescale_by_chance, validate_pair

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Strata:
    """Samples grouped by a discrete key: members of group g are order[starts[g]:starts[g] + counts[g]]."""

    order: np.ndarray
    starts: np.ndarray
    counts: np.ndarray
    group_of: np.ndarray  # group index of every sample
    position: np.ndarray  # position of every sample inside its group
    keys: np.ndarray

    @classmethod
    def from_keys(cls, keys: np.ndarray) -> "Strata":
        uniq, group_of, counts = np.unique(keys, return_inverse=True, return_counts=True)
        order = np.argsort(group_of, kind="stable")
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        position = np.empty_like(order)
        position[order] = np.arange(order.shape[0]) - starts[group_of[order]]
        return cls(order, starts, counts, group_of.ravel(), position, uniq)

    def members(self, group: int) -> np.ndarray:
        return self.order[self.starts[group] : self.starts[group] + self.counts[group]]


def _combined_key(bins: np.ndarray, sizes: list[int], columns: list[int]) -> np.ndarray:
    """Mixed-radix encoding of the bins in ``columns`` (0 when empty)."""
    key = np.zeros(bins.shape[0], dtype=np.int64)
    for c in columns:
        key = key * sizes[c] + bins[:, c]
    return key


def _require_two_factors(name: str, m: int) -> None:
    if m < 2:
        raise MetricComputationError(f"{name} classifies which factor was fixed and needs at least 2 factors")


def _normalized_codes(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Codes divided by their global std; zero-variance dimensions are dropped and reported."""
    std = codes.std(axis=0)
    live = np.flatnonzero(std > 0)
    flags = [f"code {j} has zero variance and was excluded" for j in np.flatnonzero(std <= 0)]
    if live.size == 0:
        raise MetricComputationError("Every code dimension is constant")
    return codes[:, live] / std[live], live, flags


def _majority_vote_accuracy(votes: np.ndarray) -> float:
    """Training accuracy of the classifier mapping each code to its most frequent factor."""
    total = votes.sum()
    return float(votes.max(axis=1).sum() / total) if total > 0 else 0.0


# --- Z-diff ---


def z_diff(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: InterventionParams | None = None,
    factor_bins: BinningSpec | None = None,
    seed: int = 0,
) -> MetricReport:
    """
    Each batch fixes one factor and averages |z1 - z2| over pairs sharing that
    factor's bin; a linear classifier then predicts the fixed factor.
    """
    validate_pair(factors, codes)
    params = params or InterventionParams()
    m = factors.n_factors
    _require_two_factors("Z-diff", m)
    bins, _ = discretize_factors(factors, factor_bins or BinningSpec())
    z = codes.values
    rng = np.random.default_rng(seed)

    strata = []
    for i in range(m):
        s = Strata.from_keys(bins[:, i])
        lonely = np.flatnonzero(s.counts < 2)
        if lonely.size:
            raise InsufficientSamplesError(
                f"Z-diff: bin {int(s.keys[lonely[0]])} of factor '{factors.factor_names[i]}' "
                f"holds a single sample, no pair can be formed"
            )
        strata.append(s)

    n = z.shape[0]
    labels = rng.integers(0, m, size=params.num_batches)
    features = np.empty((params.num_batches, z.shape[1]))
    for i in range(m):
        batch_ids = np.flatnonzero(labels == i)
        if batch_ids.size == 0:
            continue
        s = strata[i]
        anchors = rng.integers(0, n, size=(batch_ids.size, params.pairs_per_batch))
        groups = s.group_of[anchors]
        counts = s.counts[groups]
        # uniform partner in the same group, skipping the anchor itself
        offset = (rng.random(anchors.shape) * (counts - 1)).astype(np.int64)
        offset += offset >= s.position[anchors]
        partners = s.order[s.starts[groups] + offset]
        features[batch_ids] = np.abs(z[anchors] - z[partners]).mean(axis=1)

    n_train = params.num_train_points
    model = fit_softmax(features[:n_train], labels[:n_train], l2=params.classifier_l2, epochs=params.classifier_epochs)
    raw = accuracy(model.predict(features[n_train:]), labels[n_train:])

    return MetricReport(
        metric_name=MetricName.Z_DIFF.value,
        property=Property.HOLISTIC,
        overall=rescale_by_chance(raw, 1.0 / m),
        seed=seed,
        params=params.model_dump(mode="json"),
        details={"raw_accuracy": raw, "eval_batches": int(params.num_batches - n_train)},
    )


# --- Z-min / Z-max ---


def z_min_variance(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: InterventionParams | None = None,
    factor_bins: BinningSpec | None = None,
    seed: int = 0,
) -> MetricReport:
    """
    Fix one factor's bin, find the code dimension with the lowest (normalized)
    variance; a majority-vote classifier maps dimensions to factors.
    """
    validate_pair(factors, codes)
    params = params or InterventionParams()
    m = factors.n_factors
    _require_two_factors("Z-min Variance", m)
    bins, _ = discretize_factors(factors, factor_bins or BinningSpec())
    zn, live, flags = _normalized_codes(codes.values)
    rng = np.random.default_rng(seed)
    size = params.samples_per_subset

    strata = [Strata.from_keys(bins[:, i]) for i in range(m)]
    for i, s in enumerate(strata):
        short = np.flatnonzero(s.counts < size)
        if short.size:
            raise InsufficientSamplesError(
                f"Z-min Variance: bin {int(s.keys[short[0]])} of factor '{factors.factor_names[i]}' "
                f"has {int(s.counts[short[0]])} samples, {size} required"
            )

    n = zn.shape[0]
    votes = np.zeros((zn.shape[1], m), dtype=np.int64)
    for _ in range(params.num_batches):
        i = int(rng.integers(m))
        s = strata[i]
        group = s.group_of[rng.integers(n)]
        subset = rng.choice(s.members(group), size=size, replace=False)
        votes[int(np.argmin(zn[subset].var(axis=0))), i] += 1

    for flag in flags:
        logger.warning("Z-min Variance: %s", flag)
    raw = _majority_vote_accuracy(votes)
    return MetricReport(
        metric_name=MetricName.Z_MIN.value,
        property=Property.HOLISTIC,
        overall=rescale_by_chance(raw, 1.0 / m),
        seed=seed,
        flags=flags,
        params=params.model_dump(mode="json"),
        details={"raw_accuracy": raw, "votes": votes.tolist(), "code_dims": live.tolist()},
    )


def z_max_variance(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: InterventionParams | None = None,
    factor_bins: BinningSpec | None = None,
    seed: int = 0,
) -> MetricReport:
    """
    Fix every factor but one and pick the code dimension with the highest
    (normalized) variance. Strata need at least 2 samples; subsets smaller than
    ``samples_per_subset`` are used as they are and counted in the flags.
    """
    validate_pair(factors, codes)
    params = params or InterventionParams()
    m = factors.n_factors
    _require_two_factors("Z-max Variance", m)
    spec = factor_bins or BinningSpec()
    if params.zmax_num_bins is not None:
        spec = spec.model_copy(update={"num_bins": params.zmax_num_bins})
    bins, sizes = discretize_factors(factors, spec)
    zn, live, flags = _normalized_codes(codes.values)
    rng = np.random.default_rng(seed)
    size = params.samples_per_subset

    strata = []
    usable = []
    for i in range(m):
        s = Strata.from_keys(_combined_key(bins, sizes, [c for c in range(m) if c != i]))
        rows = np.flatnonzero(s.counts[s.group_of] >= 2)
        if rows.size == 0:
            raise InsufficientSamplesError(
                f"Z-max Variance: no two samples agree on every factor except '{factors.factor_names[i]}' "
                f"at {spec.num_bins} bins per factor"
            )
        strata.append(s)
        usable.append(rows)

    votes = np.zeros((zn.shape[1], m), dtype=np.int64)
    short_subsets = 0
    for _ in range(params.num_batches):
        i = int(rng.integers(m))
        s = strata[i]
        anchor = usable[i][rng.integers(usable[i].size)]
        members = s.members(s.group_of[anchor])
        if members.size < size:
            short_subsets += 1
            subset = members
        else:
            subset = rng.choice(members, size=size, replace=False)
        votes[int(np.argmax(zn[subset].var(axis=0))), i] += 1

    if short_subsets:
        flags.append(f"{short_subsets} of {params.num_batches} subsets had fewer than {size} samples")
    for flag in flags:
        logger.warning("Z-max Variance: %s", flag)
    raw = _majority_vote_accuracy(votes)
    return MetricReport(
        metric_name=MetricName.Z_MAX.value,
        property=Property.HOLISTIC,
        overall=rescale_by_chance(raw, 1.0 / m),
        seed=seed,
        flags=flags,
        params={**params.model_dump(mode="json"), "factor_bins": spec.num_bins},
        details={"raw_accuracy": raw, "votes": votes.tolist(), "code_dims": live.tolist()},
    )


# --- IRS ---


def attribute_codes(mi: np.ndarray) -> list[list[int]]:
    """
    Code dimensions attributed to each factor: the codes whose most informative
    factor it is, or its single most informative code when it owns none.
    """
    owner = np.argmax(mi, axis=0)
    attributed = []
    for i in range(mi.shape[0]):
        own = np.flatnonzero(owner == i).tolist()
        attributed.append(own or [int(np.argmax(mi[i]))])
    return attributed


def irs(
    factors: FactorMatrix,
    codes: CodeMatrix,
    params: InterventionParams | None = None,
    factor_bins: BinningSpec | None = None,
    code_bins: BinningSpec | None = None,
    seed: int = 0,
) -> MetricReport:
    """
    Interventional robustness: for every realization of a targeted factor, how
    far do its attributed codes move when the other factors change? The high
    quantile of that deviation is averaged over realizations (weighted by their
    frequency) and normalized by the codes' largest deviation from their mean.
    """
    validate_pair(factors, codes)
    params = params or InterventionParams()
    factor_bins = factor_bins or BinningSpec()
    bins, _ = discretize_factors(factors, factor_bins)
    tables = information_tables(factors, codes, factor_bins, code_bins)
    attributed = attribute_codes(tables.mi)
    z = codes.values
    n = z.shape[0]
    q = params.irs_quantile
    per_dimension = params.irs_distance == IrsDistance.PER_DIMENSION

    flags: list[str] = []
    per_factor: list[float] = []
    for i, dims in enumerate(attributed):
        zi = z[:, dims]
        if per_dimension:
            normalizer = np.abs(zi - zi.mean(axis=0)).max(axis=0)
        else:
            normalizer = np.array([np.linalg.norm(zi - zi.mean(axis=0), axis=1).max()])

        expected = np.zeros_like(normalizer)
        s = Strata.from_keys(bins[:, i])
        for g in range(s.counts.shape[0]):
            rows = s.members(g)
            block = zi[rows]
            dev = np.abs(block - block.mean(axis=0))
            if not per_dimension:
                dev = np.linalg.norm(dev, axis=1)[:, None]
            expected += (rows.size / n) * np.quantile(dev, q, axis=0)

        constant = normalizer <= 0
        if constant.any():
            flags.append(f"factor {i}: attributed code(s) {np.asarray(dims)[constant].tolist()} are constant")
        ratio = np.divide(expected, normalizer, out=np.zeros_like(expected), where=~constant)
        per_factor.append(float(np.clip(np.mean(1.0 - ratio), 0.0, 1.0)))

    for flag in flags:
        logger.warning("IRS: %s", flag)
    return MetricReport(
        metric_name=MetricName.IRS.value,
        property=Property.MODULARITY,
        overall=float(np.mean(per_factor)),
        per_factor=per_factor,
        aggregate="factor",
        seed=seed,
        flags=flags,
        params={"irs_distance": params.irs_distance.value, "irs_quantile": q},
        details={"attributed_codes": attributed},
    )
