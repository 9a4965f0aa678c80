from fractions import Fraction
from math import factorial

import pytest

from levymart.errors import TruncationError
from levymart.series import TruncatedSeries


def test_exp_of_identity_gives_factorials():
    e = TruncatedSeries([0, 1, 0, 0, 0, 0]).exp()
    assert [e[k] for k in range(6)] == [Fraction(1, factorial(k)) for k in range(6)]


def test_exp_of_negation_is_reciprocal():
    a = TruncatedSeries([0, 1, Fraction(1, 2), -3, 2])
    prod = a.exp() * (-a).exp()
    assert [prod[k] for k in range(5)] == [1, 0, 0, 0, 0]


def test_reading_past_order_raises():
    with pytest.raises(TruncationError):
        TruncatedSeries([1, 2])[2]


def test_derivative_and_integral_are_inverse():
    a = TruncatedSeries([0, 3, Fraction(1, 2), 4])
    assert a.derivative().integral() == a
