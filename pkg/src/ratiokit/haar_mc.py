"""Monte Carlo averages over Haar-random unitary matrices.

Samples are drawn in fixed-size chunks.  Chunk ``c`` uses a Philox stream
keyed by ``(seed, c)``, so sample ``i`` always comes from chunk
``i // CHUNK`` no matter how many workers run.  Per-chunk mean and sum of
squared deviations are merged with Chan's pairwise formulas over a fixed
binary tree, which makes the estimate bitwise independent of the worker
count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NumericalFailure, SingularSample
from .params import ExtendedParams, SpectralParams

DEFAULT_SEED = 0x5EED
SEED_ENV = "RATIOKIT_SEED"
CHUNK = 4096
UNITARITY_TOL = 1e-12
EIG_RESIDUAL_TOL = 1e-8
MODULUS_TOL = 1e-10
SINGULAR_TOL = 1e-14
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class UnitarySample:
    eigenvalues: np.ndarray

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=complex).reshape(-1)
        if ev.size == 0:
            raise ValueError("a sample needs at least one eigenvalue")
        if np.max(np.abs(np.abs(ev) - 1.0)) > MODULUS_TOL:
            raise NumericalFailure("eigenvalues are not unimodular")
        object.__setattr__(self, "eigenvalues", ev)

    @property
    def N(self):
        return self.eigenvalues.size


@dataclass(frozen=True)
class Estimate:
    mean: complex
    stderr: float
    samples: int
    seed: int
    method: str = "haar-mc"

    def to_dict(self):
        return {"mean": [self.mean.real, self.mean.imag], "stderr": self.stderr,
                "samples": self.samples, "seed": self.seed, "method": self.method}


def resolve_seed(flag: Optional[int] = None) -> int:
    """Explicit value, else ``$RATIOKIT_SEED``, else ``0x5EED``."""
    if flag is not None:
        return int(flag)
    env = os.environ.get(SEED_ENV)
    if env:
        return int(env, 0)
    return DEFAULT_SEED


def stream(seed: int, counter: int) -> np.random.Generator:
    """Counter-based generator for chunk ``counter`` of run ``seed``."""
    return np.random.Generator(np.random.Philox(key=[int(seed) & _MASK64, int(counter) & _MASK64]))


def haar_unitaries(N: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar unitaries via QR of complex Ginibre matrices."""
    if N < 1:
        raise ValueError("N must be >= 1")
    g = rng.standard_normal((count, N, N, 2))
    z = (g[..., 0] + 1j * g[..., 1]) / np.sqrt(2.0)
    qm, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    u = qm * ph[:, None, :]
    err = np.abs(np.conj(np.swapaxes(u, -1, -2)) @ u - np.eye(N)).max() if count else 0.0
    if err >= UNITARITY_TOL:
        raise NumericalFailure(f"unitarity defect {err:.3g}")
    return u


def unitary_spectra(u: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eig(u)
    if u.shape[0]:
        res = np.abs(u @ v - v * w[:, None, :]).max()
        if res > EIG_RESIDUAL_TOL:
            raise NumericalFailure(f"eigensolver residual {res:.3g}")
        if np.abs(np.abs(w) - 1.0).max() > MODULUS_TOL:
            raise NumericalFailure("eigenvalue off the unit circle")
    return w


def haar_eigenvalues(N: int, count: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_spectra(haar_unitaries(N, count, rng))


def sample_haar_unitary(N: int, rng: np.random.Generator) -> UnitarySample:
    return UnitarySample(haar_eigenvalues(N, 1, rng)[0])


# ---------------------------------------------------------------------------
# integrand
# ---------------------------------------------------------------------------

def ratio_product(xs, ys, eigenvalues) -> np.ndarray:
    """``prod_k prod_a (1 - x_k lam_a) / (1 - y_k lam_a)`` for each row of eigenvalues.

    Each factor is written as ``1 + (y - x) lam / (1 - y lam)`` so that
    ``x == y`` gives exactly 1.  Rows are sorted first so the result does
    not depend on the order of the eigenvalues, bit for bit.
    """
    lam = np.sort(np.atleast_2d(np.asarray(eigenvalues, dtype=complex)), axis=1)
    out = np.ones(lam.shape[0], dtype=complex)
    for x, y in zip(xs, ys):
        den = 1.0 - y * lam
        if np.abs(den).min(initial=np.inf) < SINGULAR_TOL:
            raise SingularSample(f"|1 - y lam| below {SINGULAR_TOL} for y={y}")
        out = out * np.prod(1.0 + (y - x) * lam / den, axis=1)
    return out


def _extended_product(params: ExtendedParams, lam):
    lam = np.sort(np.atleast_2d(np.asarray(lam, dtype=complex)), axis=1)
    bar = np.conj(lam)
    out = np.ones(lam.shape[0], dtype=complex)
    p, pp = params.p, params.pprime
    for j in range(p):
        out = out * np.prod(1.0 - params.xs[j] * lam, axis=1)
    for l in range(p, p + params.q):
        out = out * np.prod(1.0 - bar / params.xs[l], axis=1)
    for j in range(pp):
        den = 1.0 - params.ys[j] * lam
        if np.abs(den).min(initial=np.inf) < SINGULAR_TOL:
            raise SingularSample("vanishing denominator")
        out = out / np.prod(den, axis=1)
    for l in range(pp, pp + params.qprime):
        den = 1.0 - bar / params.ys[l]
        if np.abs(den).min(initial=np.inf) < SINGULAR_TOL:
            raise SingularSample("vanishing denominator")
        out = out / np.prod(den, axis=1)
    return out


def integrand(params):
    """Vectorised ``Z`` as a function of an ``(S, N)`` eigenvalue array."""
    if isinstance(params, ExtendedParams):
        return lambda lam: _extended_product(params, lam)
    return lambda lam: ratio_product(params.xs, params.ys, lam)


def eval_Z(params, sample) -> complex:
    ev = sample.eigenvalues if isinstance(sample, UnitarySample) else np.asarray(sample)
    ev = np.asarray(ev, dtype=complex).reshape(1, -1)
    if ev.shape[1] != params.N:
        raise ValueError(f"sample has {ev.shape[1]} eigenvalues, params.N = {params.N}")
    return complex(integrand(params)(ev)[0])


# ---------------------------------------------------------------------------
# streaming statistics
# ---------------------------------------------------------------------------

def _chunk_stats(values: np.ndarray):
    r = np.concatenate([values.real, values.imag], axis=1)
    mean = r.mean(axis=0)
    m2 = ((r - mean) ** 2).sum(axis=0)
    return r.shape[0], mean, m2


def _merge(a, b):
    na, ma, m2a = a
    nb, mb, m2b = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * (nb / n), m2a + m2b + delta * delta * (na * nb / n)


def _tree(stats):
    if len(stats) == 1:
        return stats[0]
    mid = (len(stats) + 1) // 2
    return _merge(_tree(stats[:mid]), _tree(stats[mid:]))


@dataclass(frozen=True)
class VectorEstimate:
    """Componentwise mean and standard error of a complex vector integrand."""

    mean: np.ndarray
    stderr: np.ndarray
    samples: int
    seed: int


def mc_average(fn: Callable[[np.ndarray], np.ndarray], N: int, samples: int,
               seed: Optional[int] = None, workers: int = 1, chunk: int = CHUNK) -> VectorEstimate:
    """Average ``fn(eigenvalues) -> (S, w)`` over Haar samples.

    ``stderr[c]`` is the larger of the real/imaginary standard errors of
    component ``c``.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    seed = resolve_seed(seed)
    sizes = [min(chunk, samples - c * chunk) for c in range((samples + chunk - 1) // chunk)]

    def run(c):
        lam = haar_eigenvalues(N, sizes[c], stream(seed, c))
        vals = np.asarray(fn(lam), dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, None]
        return _chunk_stats(vals)

    if workers <= 1:
        stats = [run(c) for c in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, range(len(sizes))))
    n, mean, m2 = _tree(stats)
    w = mean.size // 2
    se = np.sqrt(m2 / (n - 1) / n)
    return VectorEstimate(mean[:w] + 1j * mean[w:], np.maximum(se[:w], se[w:]), n, seed)


def mc_estimate(params, samples: int, seed: Optional[int] = None, workers: int = 1) -> Estimate:
    """Haar average of ``Z`` with its standard error."""
    f = integrand(params)
    est = mc_average(lambda lam: f(lam)[:, None], params.N, samples, seed, workers)
    return Estimate(complex(est.mean[0]), float(est.stderr[0]), est.samples, est.seed)
