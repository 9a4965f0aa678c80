from fractions import Fraction

import pytest

from conftest import GAUSSIAN, POISSON
from levymart.cumulants import CumulantSpec
from levymart.errors import InvalidArgumentError
from levymart.orthogonal import connection_coeffs, orthogonal_basis, orthogonality_witness, three_term_recurrence
from levymart.ratpoly import MultiPoly

x = MultiPoly.var(("x",), "x")
T1 = MultiPoly.var(("t",), "t")


def test_hermite_basis():
    b = orthogonal_basis(GAUSSIAN, 1, 3)
    assert b.poly(0) == 1 and b.poly(2) == x * x - 1 and b.poly(3) == x ** 3 - 3 * x


def test_charlier_basis():
    b = orthogonal_basis(POISSON, 1, 2)
    assert b.poly(1) == x - 1 and b.poly(2) == x * x - 3 * x + 1


def test_orthogonality_is_exact():
    b = orthogonal_basis(POISSON, Fraction(3, 2), 6)
    for i in range(b.size):
        for j in range(i):
            assert b.inner(b.Q[i], b.Q[j]) == 0


def test_nonpositive_time_rejected():
    with pytest.raises(InvalidArgumentError):
        orthogonal_basis(GAUSSIAN, 0, 2)


def test_degenerate_marginal_truncates():
    b = orthogonal_basis(CumulantSpec([1, 0, 0, 0, 0, 0]), 1, 3)
    assert b.degenerate_at == 1 and b.size == 1


@pytest.mark.parametrize("t0", [Fraction(1, 2), 1, 3, Fraction(7, 2)])
@pytest.mark.parametrize("spec", [POISSON, CumulantSpec([0, 1, 0, 2, 0, 16, 0, 272, 0, 7936, 0, 353792, 0, 0, 0, 0])])
def test_connection_checks(spec, t0):
    cc = connection_coeffs(spec, t0, 6)
    assert cc.passed, cc.mismatches


def test_first_connection_column_poisson():
    cc = connection_coeffs(POISSON, 1, 5)
    assert all(cc.b_hat[n][1] == 1 for n in range(2, 6))
    assert cc.b[2][1] == -1  # Q_2 = M_2 - (c3/c2) M_1


def test_gaussian_identity_connection():
    cc = connection_coeffs(GAUSSIAN, 2, 7)
    n = len(cc.b)
    assert all(cc.b[i][j] == (1 if i == j else 0) for i in range(n) for j in range(i + 1))
    assert cc.b == cc.b_hat


def test_three_term_recurrence_positive():
    rec = three_term_recurrence(orthogonal_basis(POISSON, 2, 6))
    assert rec.ok and all(b > 0 for b in rec.b[1:])


def test_witnesses():
    w = orthogonality_witness(POISSON, 8)
    assert w.pair == (1, 2) and w.value == T1
    w = orthogonality_witness(CumulantSpec([0, 1, 0, 2, 0, 0, 0, 0, 0]), 8)
    assert w.pair == (1, 3) and w.value == 2 * T1
    assert orthogonality_witness(GAUSSIAN, 8).orthogonal
