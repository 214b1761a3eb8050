import numpy as np
import pytest

from app.main import configure_logging
from datagen import sample_mixture, toy_ring_mixture
from models import FlowConfig

# Quiet structlog for the whole session; the CLI keeps an existing configuration
configure_logging("WARNING", "console")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def toy_mixture():
    return toy_ring_mixture(5, 6.0, 0.25)


@pytest.fixture(scope="session")
def toy_target(toy_mixture):
    return sample_mixture(toy_mixture, 1000, seed=7)


@pytest.fixture
def unit_target(rng):
    rows = rng.standard_normal((200, 4))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


@pytest.fixture
def make_config():
    def _make(**overrides) -> FlowConfig:
        values = {"h": 1.0, "lambda": 0.0, "sigma": 0.0, "n_theta": 40, "k_steps": 5, "seed": 3}
        values.update(overrides)
        return FlowConfig.model_validate(values)

    return _make
