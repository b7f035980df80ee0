import pytest

from ninarow._kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # pay the one-time JIT compile cost before any timed assertion runs
    warmup()
