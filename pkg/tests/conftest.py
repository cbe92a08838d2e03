import sys
from pathlib import Path

import numpy as np
import pytest

ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from src.zonoid import VirtualZonoid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_square():
    return VirtualZonoid.from_generators([[1, 0], [0, 1]])
