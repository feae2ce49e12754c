import math

import pytest

from ratiokit.errors import CapacityError, TruncationTooCoarse
from ratiokit.formula import eval_cor12, eval_thm1
from ratiokit.params import ExtendedParams, SpectralParams
from ratiokit.series_oracle import (TruncationPolicy, residue_average_n1, tail_bound,
                                    torus_average, vandermonde_square)


def test_golden(golden):
    r = torus_average(golden)
    assert abs(r.value - 6 / 7) < 1e-13
    assert r.bound < 1e-13
    assert residue_average_n1(golden) == pytest.approx(6 / 7, abs=1e-15)


def test_tail_bound_decreases(golden):
    b = [tail_bound(golden, m) for m in (10, 20, 40)]
    assert b[0] > b[1] > b[2]


def test_policy_requires_order_at_least_N():
    P = SpectralParams(1, 1, 3, (2, 3), (0.5, 4))
    with pytest.raises(ValueError):
        TruncationPolicy.for_params(P, 2)


def test_tolerance_too_tight_for_order(golden):
    with pytest.raises(TruncationTooCoarse):
        torus_average(golden, TruncationPolicy.for_params(golden, 3), tol=1e-12)


def test_capacity():
    P = SpectralParams(3, 0, 1, (1, 2, 3), (0.1, 0.2, 0.3))
    with pytest.raises(CapacityError):
        torus_average(P)


@pytest.mark.parametrize("N,terms", [(1, 1), (2, 3), (3, 19)])
def test_vandermonde_square_sizes(N, terms):
    v = vandermonde_square(N)
    # constant term of |Delta|^2 on the torus is N!
    assert v[tuple([0] * N)] == math.factorial(N)
    assert len(v) == terms


def test_numerator_only_extended():
    E = ExtendedParams(1, 0, 0, 0, 2, (0.4,), ())
    assert abs(torus_average(E).value - 1) < 1e-13


@pytest.mark.parametrize("p,q,N", [(1, 1, 2), (2, 1, 2), (1, 2, 3), (2, 2, 3)])
def test_agrees_with_formula(p, q, N):
    xs = [1.2, -0.8 + 0.5j, 0.3 - 1.1j, 2.0j][: p + q]
    ys = [0.3, -0.5j][:p] + [2.2, -1.9 + 0.4j][:q]
    P = SpectralParams(p, q, N, xs, ys)
    v = eval_thm1(P).value
    r = torus_average(P)
    assert abs(r.value - v) <= max(1e-8, r.bound) * max(1, abs(v))


def test_extended_agrees_with_cor12():
    E = ExtendedParams(1, 1, 2, 1, 1, (1.5, -0.7j), (0.3, -0.4j, 2.5))
    r = torus_average(E)
    assert abs(r.value - eval_cor12(E).value) < 1e-10
