import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ratiokit import jets
from ratiokit.errors import BranchError, DivisionByZeroJet
from ratiokit.jets import Jet, nth_derivative


def test_exp_derivatives():
    x = Jet.variable(0.3, 6)
    e = jets.exp(x)
    for n in range(7):
        assert e.derivative(n) == pytest.approx(math.exp(0.3), rel=1e-14)


@given(st.floats(0.2, 3.0))
def test_inverse_round_trip(a):
    x = Jet.variable(a, 5)
    one = x * x.inv()
    assert one.value == pytest.approx(1)
    assert np.allclose(one.c[1:], 0, atol=1e-12)


def test_power_rule():
    x = Jet.variable(1.7, 5)
    y = x.powN(4)
    assert y.derivative(1) == pytest.approx(4 * 1.7 ** 3)
    assert y.derivative(4) == pytest.approx(24)
    assert y.derivative(5) == pytest.approx(0, abs=1e-12)


def test_sqrt_and_branch():
    x = Jet.variable(4.0, 3)
    s = x.sqrt()
    assert s.value == pytest.approx(2)
    assert s.derivative(1) == pytest.approx(0.25)
    with pytest.raises(BranchError):
        Jet.variable(-1.0, 3).sqrt()


def test_division_by_zero_jet():
    with pytest.raises(DivisionByZeroJet):
        Jet.variable(0.0, 3).inv()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_nth_derivative_of_sin_via_exp(n):
    f = lambda c: (jets.exp(1j * c[0]) - jets.exp(-1j * c[0])) / 2j
    d = nth_derivative(f, [0.4, 9.9], 0, n)
    assert d == pytest.approx(math.sin(0.4 + n * math.pi / 2), abs=1e-13)


def test_mixed_arithmetic_with_scalars():
    x = Jet.variable(2.0, 3)
    y = 3 - x / 2 + 1 / x
    assert y.value == pytest.approx(2.5)
    assert y.derivative(1) == pytest.approx(-0.5 - 0.25)
