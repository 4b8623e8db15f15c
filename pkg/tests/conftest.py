import numpy as np
import pytest

from spectralchroma import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile/warm every kernel once so timed tests measure algorithm cost,
    not JIT compilation."""
    kernels.warm_up()
    yield


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_addoption(parser):
    parser.addoption(
        "--kernel-backend",
        default=None,
        choices=["numba", "numpy"],
        help="force a kernel backend for the whole run",
    )


def pytest_configure(config):
    backend = config.getoption("--kernel-backend")
    if backend:
        kernels.set_backend(backend)
