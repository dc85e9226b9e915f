import numpy as np
import pytest

from diracssf.landau import FieldSpec, build_lll_basis


@pytest.fixture(scope="session")
def field_b2():
    return FieldSpec(2.0)


@pytest.fixture(scope="session")
def field_b1():
    return FieldSpec(1.0)


@pytest.fixture(scope="session")
def basis_b2_64(field_b2):
    return build_lll_basis(field_b2, 64)


@pytest.fixture(scope="session")
def basis_b2_220(field_b2):
    return build_lll_basis(field_b2, 220)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
