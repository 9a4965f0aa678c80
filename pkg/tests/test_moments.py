from fractions import Fraction

import pytest

from conftest import GAUSSIAN, POISSON, RANDOM_SPECS
from levymart.cumulants import CumulantSpec
from levymart.moments import (
    MomentTable,
    central_moments,
    check_convolution,
    check_shifted_moment_identity,
    check_time_derivative,
    cumulant_sensitivity,
    moments,
    negative_time_moments,
    sensitivity_oracle,
    tpoly,
    yablonski_check,
)

t = tpoly([0, 1])


def test_poisson_moments_are_touchard():
    m = moments(POISSON, 4)
    assert m[1] == t
    assert m[2] == t ** 2 + t
    assert m[3] == t ** 3 + 3 * t ** 2 + t
    assert m[4] == t ** 4 + 6 * t ** 3 + 7 * t ** 2 + t


def test_gaussian_moments():
    m = moments(GAUSSIAN, 4)
    assert m[2] == t and m[3].is_zero() and m[4] == 3 * t ** 2


@pytest.mark.parametrize("spec", RANDOM_SPECS)
def test_first_moments(spec):
    m = moments(spec, 2)
    assert m[0] == 1 and m[1] == t * spec.c(1)


def test_negative_time():
    m = moments(POISSON, 3)
    assert negative_time_moments(m, 2) == t ** 2 - t
    assert negative_time_moments(m, 3) == -(t ** 3) + 3 * t ** 2 - t
    assert negative_time_moments(m, 0) == 1


def test_central_moments():
    c = central_moments(POISSON, 4)
    assert c[1].is_zero() and c[2] == t and c[3] == t and c[4] == 3 * t ** 2 + t
    assert central_moments(CumulantSpec([5, 1, 0, 0]), 4)[4] == 3 * t ** 2


@pytest.mark.parametrize("spec,N", [(POISSON, 8), (GAUSSIAN, 10)])
def test_convolution_holds(spec, N):
    assert check_convolution(spec, N).passed


def test_convolution_detects_corruption():
    table = moments(POISSON, 6)
    bad = list(table.m)
    bad[2] = bad[2] + t
    rep = check_convolution(POISSON, 6, MomentTable(POISSON, tuple(bad)))
    # a linear shift is itself additive, so n = 2 survives and n = 3 is the first casualty
    assert not rep.passed and min(rep.failures) == 3
    bad[2] = table[2] + t * t
    rep = check_convolution(POISSON, 6, MomentTable(POISSON, tuple(bad)))
    assert 2 in rep.failures


def test_time_derivative_identity():
    for spec in RANDOM_SPECS:
        assert check_time_derivative(moments(spec, 10)).passed


@pytest.mark.parametrize("spec,n,i", [(POISSON, 2, 1), (GAUSSIAN, 3, 2), (POISSON, 4, 0), (RANDOM_SPECS[0], 3, 3)])
def test_shifted_moment_identity(spec, n, i):
    assert check_shifted_moment_identity(spec, n, i).passed


def test_yablonski_family():
    rep = yablonski_check(POISSON, 8, partners=[GAUSSIAN.truncated(16)], alphas=[1, 2, Fraction(-1, 3)])
    assert rep.passed
    assert rep.details["reflected_sign_matches_m_negative_t"]
    assert not rep.details["reflected_sign_matches_m"]


def test_scaling_example():
    doubled = moments(POISSON.scaled(2), 3)
    assert doubled[3] == moments(POISSON, 3)[3] * 8


def test_sensitivity():
    assert cumulant_sensitivity(POISSON, 3, 2) == 3 * t ** 2
    assert cumulant_sensitivity(POISSON, 2, 5).is_zero()
    m = moments(POISSON, 5)
    assert cumulant_sensitivity(POISSON, 5, 1) == t * 5 * m[4]
    for spec in RANDOM_SPECS[:2]:
        for n in range(1, 7):
            for l in range(1, n + 1):
                assert cumulant_sensitivity(spec, n, l) == sensitivity_oracle(spec, n, l)
