import random
from fractions import Fraction

import pytest

from levymart.cumulants import CumulantSpec

GAUSSIAN = CumulantSpec([0, 1] + [0] * 14)
POISSON = CumulantSpec([1] * 16)


def random_spec(seed: int, order: int = 12) -> CumulantSpec:
    """Rational cumulants with small numerators and denominators; c2 > 0."""
    rng = random.Random(seed)
    vals = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order)]
    vals[1] = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    return CumulantSpec(vals)


RANDOM_SPECS = [random_spec(s) for s in (11, 22, 33, 44, 55)]


@pytest.fixture
def gaussian():
    return GAUSSIAN


@pytest.fixture
def poisson():
    return POISSON
