from fractions import Fraction

import pytest

from levymart.cumulants import (
    Atom,
    CumulantSpec,
    HankelVerdict,
    KolmogorovMeasure,
    MeasureClass,
    classify_measure,
    cumulants_from_measure,
    spec_from_config,
    validate_cumulants,
)
from levymart.errors import InvalidArgumentError, RejectedSpecError, TruncationError


def test_cumulants_from_measures():
    assert cumulants_from_measure(KolmogorovMeasure(1), 6).values == (0, 1, 0, 0, 0, 0)
    poisson = KolmogorovMeasure(0, (Atom(Fraction(1), Fraction(1)),), 1)
    assert cumulants_from_measure(poisson, 5).values == (1, 1, 1, 1, 1)
    shifted = KolmogorovMeasure(0, (Atom(Fraction(2), Fraction(1)),), 0)
    assert cumulants_from_measure(shifted, 5).values == (0, 1, 2, 4, 8)


def test_measure_validation():
    with pytest.raises(InvalidArgumentError):
        KolmogorovMeasure(-1)
    with pytest.raises(InvalidArgumentError):
        KolmogorovMeasure(0, (Atom(Fraction(0), Fraction(1)),))
    with pytest.raises(InvalidArgumentError):
        KolmogorovMeasure(0, (Atom(Fraction(1), Fraction(-1)),))


def test_spec_access_past_order_raises():
    with pytest.raises(TruncationError):
        CumulantSpec([0, 1]).c(3)


def test_hankel_verdicts():
    p = validate_cumulants(CumulantSpec([1, 1, 1, 1, 1]))
    assert p.hankel_verdict is HankelVerdict.DEGENERATE and p.variance_gap == 0
    g = validate_cumulants(CumulantSpec([0, 1, 0, 0, 0, 0]))
    assert g.hankel_verdict is HankelVerdict.DEGENERATE and g.variance_gap == 0
    q = validate_cumulants(CumulantSpec([0, 1, 0, 2, 0, 16]))
    assert q.hankel_verdict is HankelVerdict.POSITIVE_DEFINITE and q.variance_gap == 2


def test_invalid_sequence_flagged():
    # c2 c4 < c3^2 cannot come from a measure
    d = validate_cumulants(CumulantSpec([0, 1, 2, 2]))
    assert d.hankel_verdict is HankelVerdict.INVALID
    with pytest.raises(RejectedSpecError):
        classify_measure(CumulantSpec([0, 1, 2, 2]))


def test_classification():
    assert classify_measure(CumulantSpec([0, 1, 0, 0])).kind is MeasureClass.GAUSSIAN
    mix = classify_measure(CumulantSpec([1, 1, 1, 1]))
    assert mix.kind is MeasureClass.POISSON_GAUSSIAN_MIXTURE and mix.atom == 1
    gen = classify_measure(CumulantSpec([0, 1, 1, 2]))
    assert gen.kind is MeasureClass.GENERAL and gen.variance_gap == 1


def test_config_needs_exactly_one_form():
    with pytest.raises(InvalidArgumentError):
        spec_from_config({"cumulants": ["1"], "sigma2": "1"})
    with pytest.raises(InvalidArgumentError):
        spec_from_config({})
    assert spec_from_config({"cumulants": ["1/2", "1"]}).values == (Fraction(1, 2), 1)
    m = spec_from_config({"c1": "1", "atoms": [{"y": "1", "w": "1"}]})
    assert isinstance(m, KolmogorovMeasure)


def test_independent_sum_adds_cumulants():
    a, b = CumulantSpec([1, 2, 3]), CumulantSpec([0, 1, -1])
    assert (a + b).values == (1, 3, 2)
