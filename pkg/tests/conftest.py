import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rifslab import enumerate_orbit, make_padic_system, make_system


@pytest.fixture(scope="session")
def cantor_system():
    """x -> 3x and x -> 3x + 2: base-3 digits {0, 2}."""
    return make_system([(Fraction(3), Fraction(0)), (Fraction(3), Fraction(2))])


@pytest.fixture(scope="session")
def cantor_sample(cantor_system):
    sample = enumerate_orbit(cantor_system, 0, Fraction(3) ** 15)
    assert sample.complete
    return sample


@pytest.fixture(scope="session")
def binary_padic_system():
    """x -> 2x and x -> 2x + 1 read 2-adically."""
    return make_padic_system(2, [(1, 1, Fraction(0)), (1, 1, Fraction(1))])


@pytest.fixture(scope="session")
def renewal_system():
    """Mixed ratios 2 and 3; expansion logs have irrational ratio."""
    return make_system([(Fraction(2), Fraction(0)), (Fraction(3), Fraction(1))])
