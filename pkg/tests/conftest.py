import pytest

from braided_yangian.core.braiding import builtin_braiding
from braided_yangian.core.gaudin import classical_sites


@pytest.fixture
def flip2():
    return builtin_braiding("flip", 2)


@pytest.fixture
def dj2():
    return builtin_braiding("dj_hecke", 2)


@pytest.fixture
def conj2():
    return builtin_braiding("conjugated_flip", 2)


@pytest.fixture
def two_sites():
    """Classical system with m = 2 at the points 0 and 1"""
    return classical_sites(2, 2)
