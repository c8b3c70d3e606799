import mpmath as mp
import pytest
from mpmath import mpf

from legasym import DEFAULT_CTX, LegendreParams


@pytest.fixture(autouse=True)
def _test_side_precision():
    """Test-side arithmetic runs at 40 digits; library calls scope their own."""
    with mp.workdps(40):
        yield


@pytest.fixture(scope="session")
def ctx():
    return DEFAULT_CTX


@pytest.fixture(scope="session")
def params50(ctx):
    """The error-curve experiment configuration: nu=50, alpha=0.5."""
    return LegendreParams.from_nu_alpha(50, mpf("0.5"))


def rel_err(a, b):
    with mp.workdps(60):
        a, b = mp.mpmathify(a), mp.mpmathify(b)
        scale = max(abs(a), abs(b))
        if scale == 0:
            return mpf(0)
        return abs(a - b) / scale
