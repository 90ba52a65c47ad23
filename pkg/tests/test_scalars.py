from fractions import Fraction

import pytest

from partcat import partition as pc
from partcat.scalars import DiagramCombination, HalfPowerScalar, ONE


def test_half_power_arithmetic():
    a = HalfPowerScalar(Fraction(2), 1)
    b = HalfPowerScalar.power(-3)
    assert (a * b).half_exponent == -2 and (a * b).coefficient == 2
    assert (a + a).coefficient == 4
    assert (a - a).is_zero()
    with pytest.raises(ValueError):
        a + b


def test_evaluate_rational_and_root():
    assert HalfPowerScalar.power(-1).evaluate(4) == (Fraction(1, 2), False)
    assert HalfPowerScalar.power(1).evaluate(2) == (Fraction(1), True)
    assert HalfPowerScalar.power(-4).to_fraction(3) == Fraction(1, 9)
    with pytest.raises(ValueError):
        HalfPowerScalar.power(1).to_fraction(3)
    with pytest.raises(ValueError):
        ONE.evaluate(0)


def test_zero_normalizes_exponent():
    assert HalfPowerScalar(0, 5) == HalfPowerScalar.zero()


def test_str():
    assert str(HalfPowerScalar.power(-1)) == "n^(-1/2)"
    assert str(HalfPowerScalar(3, 2)) == "3*n^1"


def test_combination_compose_counts_loops():
    x = DiagramCombination.of(pc.pairpart())
    y = DiagramCombination.of(pc.uppairpart())
    r = y.compose(x, HalfPowerScalar.power(2))
    assert list(r) == [(pc.empty(), HalfPowerScalar.power(2))]


def test_combination_cancels():
    x = DiagramCombination.of(pc.pairpart(), HalfPowerScalar(2, 0))
    assert len(x + x.scale(-1)) == 0
