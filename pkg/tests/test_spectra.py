import numpy as np
import pytest

from ratiokit import spectra
from ratiokit.errors import AliasWarning, BlockViolation
from ratiokit.params import SpectralParams


@pytest.fixture
def on_circle():
    return SpectralParams(1, 1, 1, (1.0, 3.0), (0.5, 4))


def test_golden_profile_hand_modes(on_circle):
    # in x1 with x2 = 3 the average is 5/7 + x1/14
    prof = spectra.fourier_support(on_circle, 0)
    assert abs(prof.coefficient(0) - 5 / 7) < 1e-14
    assert abs(prof.coefficient(1) - 1 / 14) < 1e-14
    assert prof.leakage(0, 1) < 1e-14


def test_alias_warning_and_grid(on_circle):
    with pytest.warns(AliasWarning):
        spectra.fourier_support(on_circle, 0, G=2)
    with pytest.raises(ValueError):
        spectra.fourier_support(on_circle, 0, G=12)
    assert spectra.default_grid(5) == 32


@pytest.mark.parametrize("p,q,N", [(1, 1, 2), (2, 1, 3), (2, 2, 2)])
def test_support_in_zero_to_N(p, q, N):
    xs = np.exp(1j * np.linspace(0.3, 5.5, p + q))
    ys = [0.3 + 0.1j, -0.4][:p] + [2.0, 1.5j][:q]
    P = SpectralParams(p, q, N, xs, ys)
    for k in range(p + q):
        assert spectra.fourier_support(P, k).leakage(0, N) < 1e-9


def test_weyl_invariance():
    P = SpectralParams(2, 1, 2, (1.2, -0.4 + 0.9j, 0.7j), (0.3, -0.5j, 2.5))
    rng = np.random.default_rng(8)
    for _ in range(20):
        assert spectra.weyl_orbit_check(P, *spectra.random_weyl_element(2, 1, rng)) < 1e-10


def test_block_violation(golden):
    with pytest.raises(BlockViolation):
        spectra.weyl_orbit_check(golden, [1, 0], perm_phi_p=[1])


def test_stable_mode_matches_stable_value():
    assert spectra.stable_mode_gap(1, 3, (0.5, 2)) < 1e-6
