import json

import numpy as np
import pytest

from qpse.grid import GridSpec
from qpse.states import GaussianSpec, make_state


@pytest.fixture
def grid_1d():
    return GridSpec.centered(1, 1024, 40.0)


@pytest.fixture
def gaussian_1d(grid_1d):
    return make_state(GaussianSpec(sigma=1.0), grid_1d)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tmp_spec(tmp_path):
    """Write a spec (dict or raw text) to a temp file and return its path."""

    def write(payload, name="spec.json"):
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload, indent=2)
        path.write_text(text, encoding="utf-8")
        return path

    return write
