import numpy as np
import pytest

from levymart.cumulants import KolmogorovMeasure
from levymart.errors import InvalidArgumentError
from levymart.simulator import (
    BLOCK_SIZE,
    bridge_mean,
    cumulant_check,
    empirical_moment_check,
    harness_mc_check,
    martingale_mc_check,
    poisson_bridge_check,
    reversed_mc_check,
    simulate_paths,
    wilson_hilferty,
)

POISSON_M = KolmogorovMeasure(0, ((1, 1),), 1)
GAUSS_M = KolmogorovMeasure(1)
TWO_ATOM = KolmogorovMeasure("1/2", ((1, "1/2"), (-2, 1)), "1/3")
TIMES = (0.5, 1.0, 2.0)
N = 40_000


@pytest.fixture(scope="module")
def poisson_paths():
    return simulate_paths(POISSON_M, TIMES, N, seed=7)


@pytest.fixture(scope="module")
def gauss_paths():
    return simulate_paths(GAUSS_M, TIMES, N, seed=7)


def test_reproducible_and_worker_invariant():
    n = 2 * BLOCK_SIZE + 17
    a = simulate_paths(TWO_ATOM, TIMES, n, seed=3)
    b = simulate_paths(TWO_ATOM, TIMES, n, seed=3, workers=4)
    assert a.values.shape == (n, 3)
    assert np.array_equal(a.values, b.values)
    c = simulate_paths(TWO_ATOM, TIMES, n, seed=4)
    assert not np.array_equal(a.values, c.values)


def test_prefix_stable_across_path_counts():
    a = simulate_paths(POISSON_M, TIMES, BLOCK_SIZE, seed=1)
    b = simulate_paths(POISSON_M, TIMES, 3 * BLOCK_SIZE, seed=1)
    assert np.array_equal(a.values, b.values[:BLOCK_SIZE])


@pytest.mark.parametrize("times", [(), (1.0, 0.5), (0.0, 1.0), (1.0, 1.0)])
def test_bad_times_rejected(times):
    with pytest.raises(InvalidArgumentError):
        simulate_paths(GAUSS_M, times, 10, seed=0)


def test_poisson_paths_are_integers(poisson_paths):
    assert poisson_paths.is_lattice()
    assert np.allclose(poisson_paths.values, np.rint(poisson_paths.values))


def test_wilson_hilferty_centre():
    assert abs(wilson_hilferty(10.0, 10)) < 0.25
    assert wilson_hilferty(60.0, 10) > 4


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_moment_checks(poisson_paths, gauss_paths, n):
    for e in (poisson_paths, gauss_paths):
        assert empirical_moment_check(e, e.spec(6), n, 1.0).passed
        assert not empirical_moment_check(e, e.spec(6), n, 1.0, inject_fault=True).passed


@pytest.mark.parametrize("n", [2, 3])
def test_martingale_checks(poisson_paths, gauss_paths, n):
    for e in (poisson_paths, gauss_paths):
        assert martingale_mc_check(e, e.spec(6), n, 0.5, 2.0).passed
        assert not martingale_mc_check(e, e.spec(6), n, 0.5, 2.0, inject_fault=True).passed


def test_reversed_and_harness(poisson_paths, gauss_paths):
    for e in (poisson_paths, gauss_paths):
        assert reversed_mc_check(e, 0.5, 2.0).passed
        assert not reversed_mc_check(e, 0.5, 2.0, inject_fault=True).passed
        assert harness_mc_check(e, 0.5, 1.0, 2.0).passed
        assert not harness_mc_check(e, 0.5, 1.0, 2.0, inject_fault=True).passed


def test_bridge_oracle(poisson_paths):
    assert bridge_mean(6, 0.25) == pytest.approx(1.5)
    assert poisson_bridge_check(poisson_paths, 0.5, 2.0).passed
    assert poisson_bridge_check(poisson_paths, 0.5, 1.0, 2.0).passed
    assert not poisson_bridge_check(poisson_paths, 0.5, 2.0, inject_fault=True).passed
    assert not poisson_bridge_check(poisson_paths, 0.5, 1.0, 2.0, inject_fault=True).passed


def test_bridge_oracle_needs_poisson(gauss_paths):
    with pytest.raises(InvalidArgumentError):
        poisson_bridge_check(gauss_paths, 0.5, 2.0)


def test_too_few_paths_is_inconclusive():
    e = simulate_paths(GAUSS_M, TIMES, 30, seed=2)
    rep = reversed_mc_check(e, 0.5, 2.0)
    assert rep.inconclusive and rep.status == "inconclusive" and not rep.passed


def test_kstats_two_atom():
    e = simulate_paths(TWO_ATOM, TIMES, N, seed=9)
    assert all(r.passed for r in cumulant_check(e, e.spec(4)))
