import numpy as np
import pytest

from willmore_tori.families import FamilySpec, make_surface


@pytest.fixture(scope="session")
def ejiri():
    return make_surface(FamilySpec("ejiri"))


@pytest.fixture(scope="session")
def clifford_double():
    return make_surface(FamilySpec("clifford_double"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
