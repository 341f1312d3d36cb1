import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from topsqueeze.config import ExperimentConfig
from topsqueeze.lattice import assemble_hamiltonian
from topsqueeze.spectral import eigendecompose
from topsqueeze.sweep import build_lattices

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def config():
    return ExperimentConfig().validate()


@pytest.fixture(scope="session")
def lattices(config):
    return build_lattices(config)


@pytest.fixture(scope="session")
def pump_h(lattices):
    return assemble_hamiltonian(lattices["pump"])


@pytest.fixture(scope="session")
def pump_spectrum(pump_h):
    return eigendecompose(pump_h)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
