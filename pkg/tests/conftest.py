import pytest

from crmec.system import SystemParams


@pytest.fixture
def default_params() -> SystemParams:
    """Baseline scenario used throughout: 1 MHz, 1000 cycles/bit, N=5, T=10 ms,
    users at 5 m / 25 m with exponent 4, 0.5 GHz user CPUs, -90 dBW noise."""
    return SystemParams()
