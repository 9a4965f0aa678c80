import pytest

from conftest import GAUSSIAN, POISSON, RANDOM_SPECS
from levymart.martingales import (
    TX,
    at_earlier_time,
    check_hermite_recurrence,
    check_martingale_identity,
    check_mean_zero,
    conditional_expectation,
    cross_moment,
    cross_moment_oracle,
    cross_moment_printed,
    martingale_family,
    martingale_poly,
    product_expand_M1,
    product_expand_M2,
)
from levymart.ratpoly import MultiPoly

t, x = MultiPoly.gens(TX)
T1 = MultiPoly.var(("t",), "t")


def test_gaussian_family_is_hermite():
    f = martingale_family(GAUSSIAN, 4)
    assert f[0] == 1 and f[1] == x and f[2] == x * x - t
    assert f[3] == x ** 3 - 3 * t * x
    assert f[4] == x ** 4 - 6 * t * x * x + 3 * t * t


def test_poisson_low_order():
    assert martingale_poly(POISSON, 1) == x - t
    assert martingale_poly(POISSON, 2) == x * x - 2 * t * x + t * t - t


def test_conditional_expectation_examples():
    s = MultiPoly.var(("s", "t", "x"), "s")
    xs = MultiPoly.var(("s", "t", "x"), "x")
    assert conditional_expectation(GAUSSIAN, martingale_poly(GAUSSIAN, 2)) == xs * xs - s
    one = MultiPoly.constant(TX, 1)
    assert conditional_expectation(POISSON, one) == 1
    m3 = martingale_poly(POISSON, 3)
    assert conditional_expectation(POISSON, m3) == at_earlier_time(m3)


def test_non_martingale_is_detected():
    p = x * x  # X_t^2 is not a martingale
    assert conditional_expectation(GAUSSIAN, p) != at_earlier_time(p)


@pytest.mark.parametrize("spec", [GAUSSIAN, POISSON] + RANDOM_SPECS[:2])
def test_martingale_and_mean_zero(spec):
    assert check_martingale_identity(spec, 8).passed
    assert check_mean_zero(spec, 8).passed


def test_expansion_examples():
    e = product_expand_M1(GAUSSIAN, 2)
    assert e.matches and e.formula == {3: MultiPoly.constant(("t",), 1), 1: 2 * T1}
    e = product_expand_M1(POISSON, 1)
    assert e.formula == {2: MultiPoly.constant(("t",), 1), 0: T1}


@pytest.mark.parametrize("spec", [POISSON, RANDOM_SPECS[2]])
def test_expansions_match_direct(spec):
    for n in range(1, 7):
        assert product_expand_M1(spec, n).matches
        assert product_expand_M2(spec, n).matches


def test_second_order_scalars():
    c = RANDOM_SPECS[1].c
    e = product_expand_M2(RANDOM_SPECS[1], 2)
    assert e.expectation == T1 * c(4) + T1 * T1 * 2 * c(2) ** 2
    assert e.expectation == cross_moment(RANDOM_SPECS[1], 2, 2).poly
    assert cross_moment(GAUSSIAN, 2, 3).poly.is_zero()


def test_poisson_second_moment_against_truncated_support():
    from math import exp, factorial

    m2 = martingale_poly(POISSON, 2)
    brute = sum(float(m2.evaluate({"t": 1, "x": k})) ** 2 * exp(-1) / factorial(k) for k in range(41))
    assert abs(brute - 3) < 1e-12
    assert cross_moment(POISSON, 2, 2).poly.evaluate({"t": 1}) == 3


def test_cross_moment_examples():
    assert cross_moment(GAUSSIAN, 3, 3).poly == 6 * T1 ** 3
    assert cross_moment(POISSON, 2, 1).poly == T1


@pytest.mark.parametrize("spec", RANDOM_SPECS[:3])
def test_cross_moment_structure(spec):
    for n in range(1, 6):
        for k in range(1, 6):
            cm = cross_moment(spec, n, k)
            assert cm.poly == cross_moment_oracle(spec, n, k)
            assert cm.poly.coefficient("t", 1).constant_value() == spec.c(n + k) or (
                spec.c(n + k) == 0 and cm.poly.coefficient("t", 1).is_zero())


def test_displayed_cross_moment_form_fails_in_the_middle():
    printed = cross_moment_printed(POISSON, 3, 3)
    true = cross_moment(POISSON, 3, 3).d_coeffs
    assert printed[0] == true[0] and printed[2] == true[2]
    assert printed[1] == 14 and true[1] == 18


def test_hermite_recurrence():
    assert check_hermite_recurrence(martingale_family(GAUSSIAN, 9), 8).passed
    assert not check_hermite_recurrence(martingale_family(POISSON, 6), 4).passed
