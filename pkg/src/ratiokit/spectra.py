"""Weight support and Weyl symmetry of the character.

The average is a polynomial of degree at most ``N`` in every ``x_k``, so
as a function of ``psi_k`` only the Fourier modes ``0..N`` can appear.
It is also invariant under permutations of all ``x``'s and under
permutations of the ``y``'s inside each block.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AliasWarning, BlockViolation
from .formula import eval_stable, eval_thm1
from .params import SpectralParams


@dataclass(frozen=True)
class FourierProfile:
    k: int
    G: int
    modes: np.ndarray
    coefficients: np.ndarray

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.coefficients)

    def coefficient(self, m: int) -> complex:
        idx = np.nonzero(self.modes == m)[0]
        if not idx.size:
            raise KeyError(f"mode {m} is outside the grid")
        return complex(self.coefficients[idx[0]])

    def max_magnitude(self) -> float:
        return float(self.magnitudes.max())

    def leakage(self, lo: int, hi: int) -> float:
        """Largest magnitude outside ``[lo, hi]`` relative to the largest overall."""
        mag = self.magnitudes
        outside = (self.modes < lo) | (self.modes > hi)
        top = mag.max()
        return float(mag[outside].max(initial=0.0) / top) if top else 0.0


def default_grid(N: int) -> int:
    return max(16, 1 << math.ceil(math.log2(4 * N)))


def fourier_support(params: SpectralParams, k: int, G=None, precision="double") -> FourierProfile:
    """Discrete Fourier profile of the average in ``psi_k`` (0-based ``k``).

    ``x_k`` is replaced by ``exp(i psi)`` on ``G`` equispaced angles; the
    other parameters are held fixed.
    """
    if not 0 <= k < params.n:
        raise IndexError(f"variable index {k} out of range")
    G = default_grid(params.N) if G is None else int(G)
    if G < 1 or G & (G - 1):
        raise ValueError(f"grid size {G} is not a power of two")
    if G < 4 * params.N:
        warnings.warn(f"G={G} < 4N={4 * params.N}: modes may alias", AliasWarning, stacklevel=2)
    angles = 2 * np.pi * np.arange(G) / G
    vals = np.empty(G, dtype=complex)
    xs = list(params.xs)
    for g, a in enumerate(angles):
        xs[k] = complex(np.cos(a), np.sin(a))
        vals[g] = eval_thm1(params.replace(xs=tuple(xs)), precision=precision).value
    coeffs = np.fft.fftshift(np.fft.fft(vals) / G)
    modes = np.arange(-G // 2, G // 2)
    return FourierProfile(k, G, modes, coeffs)


def _check_block(perm, lo, hi, name):
    perm = [int(v) for v in perm]
    if any(v < lo or v >= hi for v in perm):
        raise BlockViolation(f"{name} maps outside the block [{lo + 1}, {hi}]")
    if sorted(perm) != list(range(lo, hi)):
        raise ValueError(f"{name} is not a permutation of its block")
    return perm


def weyl_orbit_check(params: SpectralParams, perm_psi, perm_phi_p=None, perm_phi_q=None,
                     **eval_kw) -> float:
    """Relative change of the average under a Weyl group element.

    ``perm_psi`` permutes all ``x``'s; ``perm_phi_p`` permutes indices
    ``0..p-1`` and ``perm_phi_q`` indices ``p..p+q-1`` of the ``y``'s
    (0-based, global indices).  Entry ``i`` of a permutation names the
    source index placed at position ``i``.
    """
    p, n = params.p, params.n
    perm_psi = [int(v) for v in perm_psi]
    if sorted(perm_psi) != list(range(n)):
        raise ValueError("perm_psi is not a permutation")
    perm_p = _check_block(range(p) if perm_phi_p is None else perm_phi_p, 0, p, "perm_phi_p")
    perm_q = _check_block(range(p, n) if perm_phi_q is None else perm_phi_q, p, n, "perm_phi_q")
    xs = tuple(params.xs[i] for i in perm_psi)
    ys = tuple(params.ys[i] for i in perm_p + perm_q)
    base = eval_thm1(params, **eval_kw).value
    moved = eval_thm1(params.replace(xs=xs, ys=ys), **eval_kw).value
    if moved == base:
        return 0.0
    return abs(moved - base) / abs(base)


def random_weyl_element(p: int, q: int, rng: np.random.Generator):
    n = p + q
    return (list(rng.permutation(n)), list(rng.permutation(p)),
            [p + int(v) for v in rng.permutation(q)])


def stable_mode_coefficient(p: int, N: int, ys, tiny: float = 1e-9, G=None) -> complex:
    """Mode-``N`` coefficient in ``psi_l`` for ``q = 1`` with every ``x_j`` near zero.

    As ``x_j -> 0`` this coefficient tends to the stable-range value
    (extended precision absorbs the cancellation between cosets).
    """
    xs = [tiny * (j + 1) for j in range(p)] + [1.0]
    params = SpectralParams(p, 1, N, xs, ys)
    return fourier_support(params, p, G, precision="extended").coefficient(N)


def stable_mode_gap(p: int, N: int, ys, tiny: float = 1e-9) -> float:
    ref = eval_stable(p, 1, N, ys).value
    return abs(stable_mode_coefficient(p, N, ys, tiny) - ref) / abs(ref)
