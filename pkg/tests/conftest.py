import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from igam import IgamParams, sample_igam


@pytest.fixture
def rng():
    return np.random.default_rng(20240831)


@pytest.fixture(scope="session")
def small_igam_sample():
    """One modest sampled network shared by read-only tests."""
    params = IgamParams(3, 2.0, 5)
    g, heights = sample_igam(params, seed=7)
    return params, g, heights
