import numpy as np
import pytest

from ratiokit import grassmann as g
from ratiokit.errors import (FormMismatch, ParityError, ShapeError, SingularBlock,
                             SpectrumOnCircle)
from ratiokit.haar_mc import mc_estimate
from ratiokit.params import SpectralParams

E = g.GrassmannElement


def test_generators_anticommute():
    a, b = E.generator(0, 3), E.generator(1, 3)
    assert (a * b + b * a).allclose(E.scalar(0, 3))
    assert (a * a).allclose(E.scalar(0, 3))
    assert (a * b).coefficient([0, 1]) == 1
    assert (b * a).coefficient([0, 1]) == -1


def test_parity():
    assert E.generator(0, 2).parity() == 1
    assert (E.generator(0, 2) * E.generator(1, 2)).parity() == 0
    assert (E.scalar(1, 2) + E.generator(0, 2)).parity() is None


def test_inverse_element(rng):
    x = g.random_element(4, rng) + 2.0
    assert (x * x.inverse()).allclose(E.scalar(1, 4))


def test_generator_limit():
    with pytest.raises(ShapeError):
        E(np.zeros(1 << 9))


def test_golden_sdet():
    b, c = E.generator(0, 2), E.generator(1, 2)
    S = g.sdet(g.Supermatrix.from_blocks([[2]], [[b]], [[c]], [[4]], 2))
    expected = 2 + b * c / 4
    assert np.abs(S.c - expected.c).max() <= 1e-14


def test_sdet_diagonal_body():
    X = g.Supermatrix.diag([2.0, 3.0], [5.0], 0)
    # odd block sits in A, so SDet = Det(D) / Det(A)
    assert g.sdet(X).body == pytest.approx(5 / 6)


@pytest.mark.parametrize("n1,n0", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_multiplicativity(rng, n1, n0):
    for _ in range(20):
        X = g.Supermatrix.random(n1, n0, 4, rng)
        Y = g.Supermatrix.random(n1, n0, 4, rng)
        lhs, rhs = g.sdet(X @ Y), g.sdet(X) * g.sdet(Y)
        assert np.abs(lhs.c - rhs.c).max() <= 1e-12 * max(1, np.abs(rhs.c).max())


def test_sdet_of_inverse(rng):
    X = g.Supermatrix.random(2, 1, 3, rng)
    assert (g.sdet(X.inverse()) * g.sdet(X)).allclose(E.scalar(1, 3))


@pytest.mark.parametrize("px,py", [(0, 0), (0, 1), (1, 0), (1, 1)])
def test_supertrace_of_bracket_vanishes(rng, px, py):
    for _ in range(10):
        X = g.Supermatrix.random(2, 1, 4, rng, parity=px, integer=True)
        Y = g.Supermatrix.random(2, 1, 4, rng, parity=py, integer=True)
        assert np.abs(g.supertrace(g.bracket(X, Y)).c).max() == 0


def test_singular_block():
    with pytest.raises(SingularBlock):
        g.sdet(g.Supermatrix.from_blocks([[1]], [[0]], [[0]], [[0]], 0))


def test_form_mismatch_tolerance(rng):
    X = g.Supermatrix.random(1, 1, 2, rng)
    g.sdet(X)  # default tolerance passes
    with pytest.raises(FormMismatch):
        g.sdet(X, tol=-1.0)


def test_kron_one_by_one_hand_value():
    # 1|1 block [[a, beta], [gamma, d]] with a single eigenvalue lam = 1:
    # SDet(1 - X)^-1 = (1 - a)/(1 - d) - beta gamma / (1 - d)^2
    b, c = E.generator(0, 2), E.generator(1, 2)
    X = g.Supermatrix.from_blocks([[0.3]], [[b]], [[c]], [[0.5]], 2)
    out = g.sdet_inv_id_minus_kron(X, [1.0])
    assert out.body == pytest.approx(1.4)
    assert out.coefficient([0, 1]) == pytest.approx(-4.0)


def test_kron_requires_even():
    X = g.Supermatrix.random(1, 1, 2, np.random.default_rng(0), parity=1)
    with pytest.raises(ParityError):
        g.sdet_inv_id_minus_kron(X, [1.0])


def test_spectrum_on_circle():
    X = g.Supermatrix.diag([2.0], [1.0], 0)
    with pytest.raises(SpectrumOnCircle):
        g.grassmann_character_mc(X, 1, 10)


def test_zero_generators_match_plain_mc(golden):
    X = g.Supermatrix.diag(golden.xs, golden.ys, 0)
    est = g.grassmann_character_mc(X, 1, 20_000, 17)
    ref = mc_estimate(golden, 20_000, 17)
    assert est.body == ref.mean
    assert est.body_stderr == ref.stderr


def test_character_body_near_golden(golden):
    X = g.Supermatrix.diag(golden.xs, golden.ys, 2)
    est = g.grassmann_character_mc(X, 1, 20_000, 4)
    assert abs(est.body - 6 / 7) < 4 * est.body_stderr
