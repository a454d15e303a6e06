import math

import pytest

from sbm_tcl import DqdSinc, Drude, SystemParams

DOT_COUPLING = 1.44e-2


@pytest.fixture
def drude():
    return Drude(1.0, 5.0)


@pytest.fixture
def dqd():
    return DqdSinc(1.0, 1.0, 8.0)


@pytest.fixture
def detuned():
    """Double dot with epsilon = 1, t_c = 0.5, beta = 1."""
    return SystemParams.from_dqd(1.0, 0.5, 1.0, DOT_COUPLING)


@pytest.fixture
def unbiased():
    """Double dot at zero detuning, t_c = 0.5, beta = 1."""
    return SystemParams.from_dqd(0.0, 0.5, 1.0, DOT_COUPLING)


def rel_close(a, b, rel, floor=0.0):
    return abs(a - b) <= rel * max(abs(a), abs(b)) + floor


INV_SQRT2 = 1.0 / math.sqrt(2.0)
