"""Controlled factor -> code generators.

Every generator is a pure function of its arguments: the same seed returns
bit-identical arrays. Factors are sampled i.i.d. uniform, so they are
independent by construction.
"""

import logging
import math

import numpy as np

from dmetrics.core.errors import EmptyInputError
from dmetrics.models.data import CodeMatrix, FactorMatrix
from dmetrics.models.enums import Generator
from dmetrics.models.schemas.experiment import ExperimentSpec

logger = logging.getLogger(__name__)

ANGLE_BINS = 10
ANGLE_CODES = 8


def _uniform_factors(values: np.ndarray, hi: float = 1.0, prefix: str = "v") -> FactorMatrix:
    m = values.shape[1]
    return FactorMatrix(values=values, factor_names=[f"{prefix}{i}" for i in range(m)], bounds=[(0.0, hi)] * m)


def gen_noise_mix(M: int, N: int, alpha: float, seed: int) -> tuple[FactorMatrix, CodeMatrix]:
    """z = (1 - alpha)·v + alpha·n with v, n ~ U(0, 1)."""
    rng = np.random.default_rng(seed)
    v = rng.random((N, M))
    noise = rng.random((N, M))
    z = (1.0 - alpha) * v + alpha * noise
    return _uniform_factors(v), CodeMatrix(values=z)


def rotation_matrix(M: int, alpha: float) -> np.ndarray:
    """Circulant mix: 1 - alpha on the diagonal, alpha on the wrapped next-off-diagonal."""
    eye = np.eye(M)
    return (1.0 - alpha) * eye + alpha * np.roll(eye, 1, axis=1)


def gen_rotation(M: int, N: int, alpha: float, seed: int) -> tuple[FactorMatrix, CodeMatrix]:
    if M < 2:
        raise ValueError("The rotation generator needs at least 2 factors")
    rng = np.random.default_rng(seed)
    v = rng.random((N, M))
    return _uniform_factors(v), CodeMatrix(values=v @ rotation_matrix(M, alpha))


def gen_angles(
    N: int, mode: str = "trig", seed: int = 0, redundancy: int = 2, snap_to_grid: bool = False
) -> tuple[FactorMatrix, CodeMatrix]:
    """
    Angle factors on [0, 2π) with 8 code dimensions.

    ``trig`` encodes 4 angles as [cos θ1, sin θ1, ..., sin θ4]; ``redundant``
    repeats each of 8 / redundancy angles ``redundancy`` times. Angles are
    continuous unless ``snap_to_grid`` puts them on {0, π/5, ..., 9π/5}.
    """
    if mode == "trig":
        m = ANGLE_CODES // 2
    elif mode == "redundant":
        if redundancy < 1 or ANGLE_CODES % redundancy:
            raise ValueError(f"redundancy must divide {ANGLE_CODES}, got {redundancy}")
        m = ANGLE_CODES // redundancy
    else:
        raise ValueError(f"Unknown angle mode '{mode}' (expected 'trig' or 'redundant')")

    rng = np.random.default_rng(seed)
    if snap_to_grid:
        theta = rng.integers(0, ANGLE_BINS, size=(N, m)) * (2.0 * math.pi / ANGLE_BINS)
    else:
        theta = rng.random((N, m)) * (2.0 * math.pi)

    if mode == "trig":
        z = np.empty((N, 2 * m))
        z[:, 0::2] = np.cos(theta)
        z[:, 1::2] = np.sin(theta)
    else:
        z = np.repeat(theta, redundancy, axis=1)

    return _uniform_factors(theta, hi=2.0 * math.pi, prefix="theta"), CodeMatrix(values=z)


def tangent_map(v: np.ndarray, alpha: float) -> np.ndarray:
    """Strictly increasing map of [0, 1] onto [0, 1]; alpha=0 is near-linear, alpha=1 flattens the middle."""
    omega = 2.0 * np.arctan(1000.0 ** (alpha - 0.25) / 2.0)
    return 1000.0 ** (0.25 - alpha) * np.tan(omega * (v - 0.5)) + 0.5


def gen_tangent(M: int, N: int, alpha: float, seed: int) -> tuple[FactorMatrix, CodeMatrix]:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    rng = np.random.default_rng(seed)
    v = rng.random((N, M))
    return _uniform_factors(v), CodeMatrix(values=tangent_map(v, alpha))


def mask_factors(factors: FactorMatrix, fraction: float, seed: int) -> FactorMatrix:
    """Keep ceil(fraction·M) factor columns, chosen from ``seed``, in their original order."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must lie in (0, 1], got {fraction}")
    m = factors.n_factors
    keep = math.ceil(round(fraction * m, 9))
    if keep == 0:
        raise EmptyInputError("Masking would retain no factor column")
    if keep == m:
        return factors
    columns = np.sort(np.random.default_rng(seed).choice(m, size=keep, replace=False)).tolist()
    logger.debug("Masked factors", extra={"kept": columns, "total": m})
    return factors.select(columns)


def generate(spec: ExperimentSpec, seed: int) -> tuple[FactorMatrix, CodeMatrix]:
    """Build the factor/code pair described by ``spec`` for one seed."""
    m, n = spec.num_factors, spec.num_samples
    match spec.generator:
        case Generator.NOISE_MIX:
            return gen_noise_mix(m, n, spec.alpha or 0.0, seed)
        case Generator.ROTATION:
            return gen_rotation(m, n, spec.alpha or 0.0, seed)
        case Generator.TANGENT:
            return gen_tangent(m, n, spec.alpha or 0.0, seed)
        case Generator.ANGLE_TRIG:
            return gen_angles(n, "trig", seed, snap_to_grid=spec.snap_to_grid)
        case Generator.REDUNDANT:
            return gen_angles(n, "redundant", seed, redundancy=spec.redundancy, snap_to_grid=spec.snap_to_grid)
        case Generator.HIDDEN_FACTORS:
            factors, codes = gen_noise_mix(m, n, spec.alpha or 0.0, seed)
            return mask_factors(factors, spec.fraction or 1.0, seed), codes
    raise ValueError(f"Unsupported generator {spec.generator}")
