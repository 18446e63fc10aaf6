import pytest

from swipt_daf.model import derive_constants, reference_params


@pytest.fixture(scope="session")
def baseline_params():
    """Benchmark configuration: P0=10 W, eta=0.7, theta=0.5, alpha=2, unit
    distances, all noise variances 1/2."""
    return reference_params(10.0)


@pytest.fixture(scope="session")
def baseline_constants(baseline_params):
    return derive_constants(baseline_params)
