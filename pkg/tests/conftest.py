import os
import tempfile

import numpy as np
import pytest

# Set testing environment BEFORE importing dmetrics modules
# so the settings singleton is built with these values
os.environ["DMETRICS_TESTING"] = "1"
os.environ["DMETRICS_LOG_FORMAT"] = "plain"
os.environ.setdefault("DMETRICS_OUTPUT_DIR", tempfile.mkdtemp(prefix="dmetrics-tests-"))

# Now import dmetrics modules
from dmetrics.core.config import settings  # noqa: E402
from dmetrics.models.schemas.params import InterventionParams  # noqa: E402
from dmetrics.services.synthgen import gen_angles, gen_noise_mix  # noqa: E402


@pytest.fixture(autouse=True)
def output_dir(tmp_path, monkeypatch):
    """Every test writes under its own temporary directory."""
    monkeypatch.setattr(settings, "OUTPUT_DIR", str(tmp_path / "results"))
    return tmp_path / "results"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def identity_pair():
    """8 uniform factors copied into 8 codes."""
    return gen_noise_mix(8, 3000, 0.0, seed=0)


@pytest.fixture(scope="session")
def noise_pair():
    """8 uniform factors and 8 unrelated uniform codes."""
    return gen_noise_mix(8, 3000, 1.0, seed=0)


@pytest.fixture(scope="session")
def trig_pair():
    return gen_angles(4000, "trig", seed=0)


@pytest.fixture(scope="session")
def redundant_pair():
    return gen_angles(4000, "redundant", seed=0, redundancy=2)


@pytest.fixture
def fast_intervention():
    """Fewer batches than the defaults; enough for stable scores at a few thousand samples."""
    return InterventionParams(num_batches=1000, num_train_points=700)
