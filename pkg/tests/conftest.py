import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from covrep.examples import corpus_instances


@pytest.fixture(scope="session")
def corpus():
    return corpus_instances()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
