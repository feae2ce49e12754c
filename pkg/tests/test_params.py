import json

import pytest
from hypothesis import given, strategies as st

from ratiokit.errors import CapacityError, DomainViolation, ShapeError
from ratiokit.params import (CosetTable, ExtendedParams, SpectralParams, Weight,
                             enumerate_cosets, highest_weight_multiplier, validate,
                             validate_extended)


def test_golden_record_fields(golden):
    assert golden.n == 2
    assert golden.xs == (2 + 0j, 3 + 0j)
    assert golden.ys == (0.5 + 0j, 4 + 0j)


@pytest.mark.parametrize("ys,index", [((1.5, 4), 1), ((0.5, 0.9), 2), ((1.0, 4), 1), ((0.5, 1.0), 2)])
def test_domain_violation_names_index(ys, index):
    with pytest.raises(DomainViolation) as exc:
        SpectralParams(1, 1, 1, (2, 3), ys)
    assert exc.value.index == index
    assert f"index {index}" in str(exc.value)


@pytest.mark.parametrize("kw", [
    dict(p=1, q=1, N=1, xs=(2,), ys=(0.5, 4)),
    dict(p=1, q=1, N=1, xs=(2, 3), ys=(0.5,)),
])
def test_shape_error(kw):
    with pytest.raises(ShapeError):
        SpectralParams(**kw)


@pytest.mark.parametrize("kw", [
    dict(p=1, q=1, N=0, xs=(2, 3), ys=(0.5, 4)),
    dict(p=-1, q=2, N=1, xs=(2, 3), ys=(2, 4)),
    dict(p=0, q=0, N=1, xs=(), ys=()),
    dict(p=1, q=1, N=1, xs=(0, 3), ys=(0.5, 4)),
])
def test_invalid_counts_and_xs(kw):
    with pytest.raises(ValueError):
        SpectralParams(**kw)


def test_json_round_trip(golden):
    again = SpectralParams.from_json(golden.to_json())
    assert again == golden
    assert json.loads(again.to_json()) == golden.to_dict()


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=2, max_size=2))
def test_round_trip_arbitrary_xs(pairs):
    xs = [complex(a, b) for a, b in pairs]
    if any(x == 0 for x in xs):
        return
    P = SpectralParams(1, 1, 2, xs, (0.3j, -2.5))
    assert SpectralParams.from_json(P.to_json()) == P


def test_validate_mapping_and_missing():
    raw = {"p": 1, "q": 1, "N": 1, "xs": [[2, 0], [3, 0]], "ys": [[0.5, 0], [4, 0]]}
    assert validate(raw).ys[1] == 4
    with pytest.raises(ShapeError):
        validate({"p": 1, "q": 1, "N": 1, "xs": []})
    with pytest.raises(TypeError):
        validate([1, 2])


def test_from_angles():
    import cmath
    P = SpectralParams.from_angles(1, 1, 1, [0.0, cmath.pi / 2], [-1.0, 1.0])
    assert abs(P.xs[1] - 1j) < 1e-15
    assert abs(P.ys[0] - cmath.exp(-1)) < 1e-15


def test_extended_params_limits():
    E = ExtendedParams(1, 0, 2, 0, 1, (0.4,), (0.2, 0.3))
    assert E.pprime == 2
    with pytest.raises(DomainViolation):
        ExtendedParams(1, 0, 3, 0, 1, (0.4,), (0.2, 0.3, 0.1))
    with pytest.raises(ShapeError):
        ExtendedParams(1, 0, 1, 0, 1, (0.4, 0.5), (0.2,))


def test_validate_extended_defaults_to_equal_counts(golden):
    E = validate_extended(golden.to_dict())
    assert (E.pprime, E.qprime) == (1, 1)
    assert validate_extended(golden) == E


def test_highest_weight_multiplier(golden):
    assert highest_weight_multiplier(golden) == pytest.approx(3 / 4)
    P = SpectralParams(2, 0, 3, (2, 3), (0.1, 0.2))
    assert highest_weight_multiplier(P) == 1


@pytest.mark.parametrize("p,q,count", [(1, 1, 2), (2, 1, 3), (2, 2, 6), (3, 0, 1), (0, 2, 1)])
def test_coset_count_and_identity_first(p, q, count):
    table = enumerate_cosets(p, q)
    assert isinstance(table, CosetTable)
    assert len(table) == count
    assert table[0] == (tuple(range(p)), tuple(range(p, p + q)))
    for J, L in table:
        assert sorted(J + L) == list(range(p + q))


def test_coset_order_and_one_based():
    table = enumerate_cosets(2, 1)
    assert [L for _, L in table] == [(2,), (0,), (1,)]
    assert table.one_based()[0] == ((1, 2), (3,))


def test_coset_capacity():
    with pytest.raises(CapacityError):
        enumerate_cosets(10, 10, limit=1000)


def test_weight_admissibility():
    assert Weight.highest(1, 1, 2).admissible(1, 1, 2)
    assert not Weight((0, 3), (0, 2)).admissible(1, 1, 2)
    assert not Weight((0, 2), (1, 2)).admissible(1, 1, 2)
    assert Weight((0, 0), (0, 0)).evaluate([1.0, 2.0], [0.5, 0.5]) == 1
