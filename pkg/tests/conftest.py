"""Shared expensive fixtures: the 27-dim exceptional algebra and its derivations."""

import pytest

from albert.derivations import derivation_algebra, stabilizer
from albert.jordan import make_hermitian, octonion_algebra

# coordinates of the complex-hermitian part inside the 27-dim basis:
# the three diagonal slots plus the 1, i components of each off-diagonal octonion
COMPLEX_PART = [0, 1, 2, 3, 4, 11, 12, 19, 20]


@pytest.fixture(scope="session")
def h3o():
    return make_hermitian("O", 3)


@pytest.fixture(scope="session")
def oct_alg():
    return octonion_algebra()


@pytest.fixture(scope="session")
def der_f4(h3o):
    return derivation_algebra(h3o)


@pytest.fixture(scope="session")
def der_g2(oct_alg):
    return derivation_algebra(oct_alg)


@pytest.fixture(scope="session")
def su3_color(h3o, der_f4):
    """Pointwise stabilizer of the complex-hermitian part: su(3), dim 8."""
    fixed = [h3o.basis_elem(i) for i in COMPLEX_PART]
    return stabilizer(der_f4, fixed=fixed, name="su3-color")
