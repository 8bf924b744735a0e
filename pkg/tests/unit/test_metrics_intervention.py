"""Tests for the intervention-based metrics"""

import numpy as np
import pytest

from dmetrics.core.errors import InsufficientSamplesError, MetricComputationError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import IrsDistance
from dmetrics.models.schemas.params import BinningSpec, InterventionParams
from dmetrics.services.metrics.intervention import (
    Strata,
    attribute_codes,
    irs,
    z_diff,
    z_max_variance,
    z_min_variance,
)
from dmetrics.services.synthgen import gen_noise_mix


def test_strata_group_members():
    s = Strata.from_keys(np.array([2, 0, 2, 1, 0]))
    assert s.keys.tolist() == [0, 1, 2]
    assert s.counts.tolist() == [2, 1, 2]
    assert s.members(2).tolist() == [0, 2]
    assert [int(s.order[s.starts[s.group_of[r]] + s.position[r]]) for r in range(5)] == list(range(5))


def test_attribute_codes_falls_back_to_best_code():
    mi = np.array([[0.9, 0.8], [0.1, 0.7]])
    assert attribute_codes(mi) == [[0, 1], [1]]


# Z-diff
def test_z_diff_on_identity_codes(identity_pair, fast_intervention):
    factors, codes = identity_pair
    report = z_diff(factors, codes, fast_intervention, seed=1)
    assert report.overall > 0.9
    assert report.details["eval_batches"] == 300


def test_z_diff_on_unrelated_codes(noise_pair, fast_intervention):
    factors, codes = noise_pair
    assert z_diff(factors, codes, fast_intervention, seed=1).overall < 0.15


def test_z_diff_needs_two_factors(fast_intervention):
    factors, codes = gen_noise_mix(1, 500, 0.0, seed=0)
    with pytest.raises(MetricComputationError, match="at least 2 factors"):
        z_diff(factors, codes, fast_intervention)


def test_z_diff_needs_a_pair_per_bin(fast_intervention):
    factors = FactorMatrix(values=[[0.05, 0.5], [0.95, 0.5], [0.95, 0.6]], bounds=[(0.0, 1.0), (0.0, 1.0)])
    codes = CodeMatrix(values=np.zeros((3, 2)))
    with pytest.raises(InsufficientSamplesError, match="single sample"):
        z_diff(factors, codes, fast_intervention, BinningSpec.empirical(2))


# Z-min / Z-max
def test_z_min_variance_on_identity_codes(identity_pair, fast_intervention):
    factors, codes = identity_pair
    report = z_min_variance(factors, codes, fast_intervention, seed=2)
    assert report.overall == 1.0
    assert np.array(report.details["votes"]).sum() == fast_intervention.num_batches


def test_z_min_variance_on_unrelated_codes(noise_pair, fast_intervention):
    factors, codes = noise_pair
    assert z_min_variance(factors, codes, fast_intervention, seed=2).overall < 0.2


def test_z_min_variance_needs_full_subsets(fast_intervention):
    factors, codes = gen_noise_mix(2, 100, 0.0, seed=0)
    with pytest.raises(InsufficientSamplesError, match="64 required"):
        z_min_variance(factors, codes, fast_intervention)


def test_z_min_variance_drops_constant_codes(fast_intervention):
    factors, codes = gen_noise_mix(2, 2000, 0.0, seed=0)
    padded = CodeMatrix(values=np.column_stack([codes.values, np.ones(2000)]))
    report = z_min_variance(factors, padded, fast_intervention)
    assert report.details["code_dims"] == [0, 1]
    assert report.flags == ["code 2 has zero variance and was excluded"]


def test_z_max_variance_on_two_identity_factors():
    factors, codes = gen_noise_mix(2, 3000, 0.0, seed=0)
    params = InterventionParams(num_batches=500, num_train_points=100, zmax_num_bins=3)
    report = z_max_variance(factors, codes, params, seed=4)
    assert report.overall == 1.0
    assert report.params["factor_bins"] == 3


def test_z_max_variance_fails_when_no_stratum_has_a_pair():
    factors = FactorMatrix(values=[[0.1, 0.1], [0.9, 0.9]], bounds=[(0.0, 1.0), (0.0, 1.0)])
    codes = CodeMatrix(values=[[0.0, 1.0], [1.0, 0.0]])
    params = InterventionParams(num_batches=10, num_train_points=5)
    with pytest.raises(InsufficientSamplesError, match="no two samples agree"):
        z_max_variance(factors, codes, params, BinningSpec.empirical(2))


# IRS
def test_irs_prefers_robust_codes(identity_pair, noise_pair, fast_intervention):
    clean = irs(*identity_pair, fast_intervention)
    noisy = irs(*noise_pair, fast_intervention)
    assert clean.overall > 0.8
    assert noisy.overall < 0.3
    assert clean.details["attributed_codes"] == [[i] for i in range(8)]


def test_irs_l2_distance(identity_pair):
    params = InterventionParams(irs_distance=IrsDistance.L2)
    report = irs(*identity_pair, params)
    assert report.params["irs_distance"] == "l2"
    assert 0.0 <= report.overall <= 1.0
