import math

import pytest
from hypothesis import given, settings, strategies as st

from ratiokit.errors import CapacityError, DomainViolation
from ratiokit.formula import (eval_compact, eval_confluent, eval_cor12, eval_stable, eval_thm1,
                              find_clusters, thm1_term)
from ratiokit.params import ExtendedParams, SpectralParams, highest_weight_multiplier
from ratiokit.series_oracle import residue_average_n1


def test_golden_terms(golden):
    # identity coset 15/14, swap -3/14 (residue computation by hand)
    ident = thm1_term(golden.xs, golden.ys, 1, 1, (0,), (1,))
    swap = thm1_term(golden.xs, golden.ys, 1, 1, (1,), (0,))
    assert abs(ident - 15 / 14) < 1e-15
    assert abs(swap + 3 / 14) < 1e-15


def test_golden_value(golden):
    r = eval_thm1(golden, keep_terms=True)
    assert abs(r.value - 6 / 7) <= 1e-12
    assert r.method == "direct"
    assert len(r.terms) == 2
    assert r.condition >= 1


def test_extended_precision_agrees(golden):
    r = eval_thm1(golden, precision="extended")
    assert abs(r.value - 6 / 7) <= 1e-14
    assert r.precision == "extended"


def test_auto_precision_stays_double_when_well_conditioned(golden):
    assert eval_thm1(golden, precision="auto").precision == "double"


@pytest.mark.parametrize("x1", [0.5, 2.0, -1.5, 1j])
def test_golden_line_is_affine_in_x1(x1):
    # with x2 = 3 fixed the average is 5/7 + x1/14
    P = SpectralParams(1, 1, 1, (x1, 3), (0.5, 4))
    assert abs(eval_thm1(P).value - (5 / 7 + x1 / 14)) < 1e-13


def test_confluent_pair():
    P = SpectralParams(1, 1, 1, (2, 2), (0.5, 4))
    r = eval_thm1(P)
    assert r.method == "confluent-extrapolated"
    assert abs(r.value - 5 / 7) < 1e-9


def test_confluent_matches_limit():
    P = SpectralParams(1, 1, 2, (1.3 + 0.2j, 1.3 + 0.2j), (0.4j, -2))
    near = eval_thm1(P.replace(xs=(1.3 + 0.2j, 1.3 + 0.2j + 1e-4)), confluent=False).value
    assert abs(eval_confluent(P).value - near) < 1e-3 * max(1, abs(near))


def test_find_clusters():
    assert find_clusters([1, 2, 1 + 1e-9, 3]) == [(0, 2)]
    assert find_clusters([1, 2, 3]) == []


def test_n1_matches_residue_oracle(rng):
    for _ in range(10):
        xs = rng.normal(size=3) + 1j * rng.normal(size=3)
        ys = [0.4 * complex(*rng.normal(size=2)) / 2, 0.3, 2.5 * 1j]
        ys[0] = ys[0] if abs(ys[0]) < 1 else ys[0] / (2 * abs(ys[0]))
        P = SpectralParams(2, 1, 1, xs, ys)
        assert abs(eval_thm1(P).value - residue_average_n1(P)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.floats(0.1, 0.9), st.floats(1.2, 4.0), st.floats(0, 6.28), st.floats(0, 6.28))
def test_trivial_identity(N, a, b, t1, t2):
    ys = (a * complex(math.cos(t1), math.sin(t1)), b * complex(math.cos(t2), math.sin(t2)))
    P = SpectralParams(1, 1, N, ys, ys)
    assert abs(eval_thm1(P).value - 1) <= 1e-12


def test_compact_values():
    assert abs(eval_compact(1, 1, 2, (0.3, 0.7)).value - 0.79) <= 1e-12
    assert abs(eval_compact(1, 1, 2, (0.3, 0.3)).value - 0.27) <= 1e-6


def test_compact_triple_cluster():
    # q = 1: complete homogeneous h_2 of three equal arguments, 6 * 0.09
    assert abs(eval_compact(2, 1, 2, (0.3, 0.3, 0.3)).value - 0.54) <= 1e-6


def test_stable_value():
    assert abs(eval_stable(1, 1, 3, (0.5, 2)).value - 1 / 6) <= 1e-12
    with pytest.raises(DomainViolation):
        eval_stable(2, 2, 1, (0.5, 0.5, 2, 2))
    with pytest.raises(DomainViolation):
        eval_stable(1, 1, 3, (1.5, 2))


def test_cor12_equal_counts(golden):
    v = eval_cor12(ExtendedParams.from_spectral(golden)).value
    assert abs(v - (6 / 7) / highest_weight_multiplier(golden)) < 1e-13


def test_cor12_pure_denominator():
    # p = q = 0 numerators, one denominator of each kind, N = 3, ys = (0.5, 2)
    E = ExtendedParams(0, 0, 1, 1, 1, (), (0.5, 2))
    assert abs(eval_cor12(E).value - 4 / 3) < 1e-13


def test_coset_limit_raises(golden):
    with pytest.raises(CapacityError):
        eval_thm1(golden, coset_limit=1)
