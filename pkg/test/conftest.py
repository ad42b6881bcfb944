import numpy as np
import pytest

from fracdiff.fracdiff import create_fracdiff
from fracdiff.models.model_params import KernelKind, ModelParams


@pytest.fixture
def gaussian_params():
    return ModelParams(gamma=1.0, theta=0.0, n_dim=1, d_coeff=1.0)


@pytest.fixture
def mixed_params():
    """Power-law kernel in the mixed case; mu = 1.5 keeps the density series short."""
    return ModelParams(gamma=0.5, mu=1.5, k_drift=1.0, d_coeff=1.0, alpha_mem=0.5,
                       kernel_kind=KernelKind.POWER_LAW)


@pytest.fixture
def impulsive_mixed_params():
    return ModelParams(gamma=0.5, mu=1.5, k_drift=1.0, d_coeff=1.0)


@pytest.fixture
def heat_kernel():
    def kernel(x, t, d=1.0):
        x = np.asarray(x, dtype=float)
        return np.exp(-x ** 2 / (4.0 * d * t)) / np.sqrt(4.0 * np.pi * d * t)
    return kernel


@pytest.fixture
def app():
    return create_fracdiff(["profile", "--nx", "16"], debug=True)


def pytest_configure(config):
    # Register custom marker so pytest doesn't warn
    config.addinivalue_line("markers", "slow: multi-second oracle and series runs")
