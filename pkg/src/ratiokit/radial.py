"""Radial operators on the torus and the differential equations of the character.

Coordinates: ``x_k = exp(i psi_k)`` and ``y_k = exp(phi_k)``.  Positive
roots, written through ``exp(-alpha)``:

* even: ``i psi_k - i psi_k'`` -> ``x_k'/x_k`` and ``phi_k - phi_k'`` -> ``y_k'/y_k`` (k' < k)
* odd:  ``i psi_k - phi_j`` -> ``y_j/x_k`` (j < p) and ``phi_l - i psi_k`` -> ``x_k/y_l`` (l >= p)

``J`` is the product of ``sinh^2(alpha/2)`` over even roots divided by
the one over odd roots.  Every function here is written with generic
arithmetic so it can run on jets.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, SingularPoint
from .formula import thm1_generic
from .jets import DEFAULT_DEGREE, exp, nth_derivative

REGULARITY_MARGIN = 1e-6
BRANCH_MARGIN = 1e-9


def _roots(xs, ys, p):
    """``exp(-alpha)`` for the even and odd positive roots."""
    n = len(xs)
    even = [xs[kp] / xs[k] for k in range(n) for kp in range(k)]
    even += [ys[kp] / ys[k] for k in range(n) for kp in range(k)]
    odd = [ys[j] / xs[k] for k in range(n) for j in range(p)]
    odd += [xs[k] / ys[l] for k in range(n) for l in range(p, n)]
    return even, odd


def delta_coefficients(p: int, q: int):
    """Coefficients ``(a_k, b_k)`` of ``delta = sum a_k i psi_k + sum b_k phi_k``."""
    a = [k - p - 0.5 for k in range(1, p + q + 1)]
    b = [j - 0.5 for j in range(1, p + 1)] + [l - p - q - 0.5 for l in range(p + 1, p + q + 1)]
    return a, b


@dataclass(frozen=True)
class RadialPoint:
    p: int
    q: int
    psi: tuple
    phi: tuple

    def __post_init__(self):
        object.__setattr__(self, "psi", tuple(float(v) for v in self.psi))
        object.__setattr__(self, "phi", tuple(float(v) for v in self.phi))
        n = self.p + self.q
        if len(self.psi) != n or len(self.phi) != n:
            raise ValueError(f"expected {n} psi and {n} phi values")
        for k, v in enumerate(self.phi):
            if (k < self.p and not v < 0) or (k >= self.p and not v > 0):
                raise ValueError(f"phi_{k + 1} = {v} has the wrong sign for its block")

    @property
    def n(self):
        return self.p + self.q

    @property
    def xs(self):
        return [cmath.exp(1j * a) for a in self.psi]

    @property
    def ys(self):
        return [math.exp(b) for b in self.phi]

    def margin(self) -> float:
        even, odd = _roots(self.xs, self.ys, self.p)
        return min((abs(1 - e) for e in even + odd), default=math.inf)

    def require_regular(self, margin=REGULARITY_MARGIN):
        m = self.margin()
        if m <= margin:
            raise SingularPoint(f"regularity margin {m:.3g} is below {margin:g}")
        return m

    @classmethod
    def random(cls, p, q, rng: np.random.Generator, margin=0.05):
        while True:
            psi = rng.uniform(-math.pi + 0.1, math.pi - 0.1, p + q)
            phi = np.concatenate([-rng.uniform(0.1, 1.5, p), rng.uniform(0.1, 1.5, q)])
            pt = cls(p, q, tuple(psi), tuple(phi))
            if pt.margin() > margin:
                return pt


# ---------------------------------------------------------------------------
# generic forms
# ---------------------------------------------------------------------------

def J_generic(psi, phi, p):
    xs = [exp(1j * a) for a in psi]
    ys = [exp(b) for b in phi]
    even, odd = _roots(xs, ys, p)
    # sinh^2(alpha/2) = (1 - e^-alpha)^2 / (4 e^-alpha)
    out = 1
    for e in even:
        out = out * (1 - e) * (1 - e) / (4 * e)
    for e in odd:
        out = out * (4 * e) / ((1 - e) * (1 - e))
    return out


def sqrtJ_generic(psi, phi, p):
    q = len(psi) - p
    xs = [exp(1j * a) for a in psi]
    ys = [exp(b) for b in phi]
    even, odd = _roots(xs, ys, p)
    a, b = delta_coefficients(p, q)
    d = 0
    for ak, v in zip(a, psi):
        d = d + 1j * ak * v
    for bk, v in zip(b, phi):
        d = d + bk * v
    out = exp(d)
    for e in even:
        out = out * (1 - e) / 2
    for e in odd:
        out = out * 2 / (1 - e)
    return out


def chi_generic(psi, phi, p, N):
    xs = [exp(1j * a) for a in psi]
    ys = [exp(b) for b in phi]
    return thm1_generic(xs, ys, p, len(psi) - p, N)


def _principal(psi):
    out = []
    for a in psi:
        r = math.remainder(a, 2 * math.pi)
        if math.pi - abs(r) < BRANCH_MARGIN:
            raise BranchError(f"psi = {a} lies on the branch cut of the half-integer powers")
        out.append(r)
    return out


# ---------------------------------------------------------------------------
# point evaluations
# ---------------------------------------------------------------------------

def eval_J(point: RadialPoint) -> complex:
    point.require_regular()
    return complex(J_generic(point.psi, point.phi, point.p))


def eval_sqrtJ(point: RadialPoint) -> complex:
    """Square root of ``J`` with ``exp(delta)`` on the principal branch.

    Angles are reduced to ``(-pi, pi]`` before the half-integer powers are
    taken; ``x_k = -1`` is the cut.
    """
    point.require_regular()
    return complex(sqrtJ_generic(_principal(point.psi), point.phi, point.p))


def sinh_product_J(point: RadialPoint) -> complex:
    """Direct product of ``sinh^2`` over the root list (independent check)."""
    n, p = point.n, point.p
    psi, phi = point.psi, point.phi
    num = 1 + 0j
    den = 1 + 0j
    for k in range(n):
        for kp in range(k):
            num *= cmath.sinh((1j * psi[k] - 1j * psi[kp]) / 2) ** 2
            num *= cmath.sinh((phi[k] - phi[kp]) / 2) ** 2
    for k in range(n):
        for j in range(p):
            den *= cmath.sinh((1j * psi[k] - phi[j]) / 2) ** 2
        for l in range(p, n):
            den *= cmath.sinh((phi[l] - 1j * psi[k]) / 2) ** 2
    return num / den


def compact_J(psi, theta) -> float:
    """Product form on the compact torus (both families as real angles)."""
    n = len(psi)
    out = 1.0
    for j in range(n):
        for jp in range(j + 1, n):
            out *= math.sin((psi[j] - psi[jp]) / 2) ** 2
            out *= math.sin((theta[j] - theta[jp]) / 2) ** 2
    for j in range(n):
        for l in range(n):
            out /= math.sin((psi[j] - theta[l]) / 2) ** 2
    return out


def cauchy_J(psi, theta) -> float:
    """Squared determinant of ``1 / sin((psi_j - theta_l) / 2)``."""
    m = 1.0 / np.sin((np.subtract.outer(np.asarray(psi), np.asarray(theta))) / 2)
    return float(np.linalg.det(m) ** 2)


def universal_J_on_compact(psi, theta, p) -> complex:
    """``J`` with ``phi = i theta``; equals ``(-1)^n`` times :func:`compact_J`."""
    return complex(J_generic(list(psi), [1j * t for t in theta], p))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def _pure_derivatives(f, point: RadialPoint, l: int, degree: int):
    n = point.n
    coords = list(point.psi) + list(point.phi)

    def flat(c):
        return f(c[:n], c[n:])

    d_psi = [nth_derivative(flat, coords, k, l, degree) for k in range(n)]
    d_phi = [nth_derivative(flat, coords, n + k, l, degree) for k in range(n)]
    return d_psi, d_phi


def apply_Dl(f, point: RadialPoint, l: int, degree: int = DEFAULT_DEGREE) -> complex:
    """``sum_k d^l f/d psi_k^l - (-i)^l sum_k d^l f/d phi_k^l``.

    ``f(psi, phi)`` receives two lists (of jets) and returns a jet or number.
    """
    d_psi, d_phi = _pure_derivatives(f, point, l, max(l, degree))
    return sum(d_psi) - (-1j) ** l * sum(d_phi)


def _residual(f, point, l, degree):
    d_psi, d_phi = _pure_derivatives(f, point, l, max(l, degree))
    value = complex(f(list(point.psi), list(point.phi)))
    total = sum(d_psi) - (-1j) ** l * sum(d_phi)
    scale = max([abs(value)] + [abs(d) for d in d_psi + d_phi])
    return abs(total) / scale if scale else abs(total)


def pde_residual(point: RadialPoint, N: int, l: int, extra=None,
                 degree: int = DEFAULT_DEGREE) -> float:
    """Scaled ``|D_l (J^(1/2) chi)|`` with ``chi`` the coset formula on jets.

    ``extra(psi, phi)``, if given, is added to ``chi`` (negative controls).
    """
    point.require_regular()
    p = point.p

    def f(psi, phi):
        chi = chi_generic(psi, phi, p, N)
        if extra is not None:
            chi = chi + extra(psi, phi)
        return sqrtJ_generic(psi, phi, p) * chi

    return _residual(f, point, l, degree)


def sqrtJ_residual(point: RadialPoint, l: int, degree: int = DEFAULT_DEGREE) -> float:
    """Scaled ``|D_l J^(1/2)|``."""
    point.require_regular()
    return _residual(lambda psi, phi: sqrtJ_generic(psi, phi, point.p), point, l, degree)


def weight_exponential(m, n):
    """``exp(sum_k (i m_k psi_k - n_k phi_k))`` as a jet-evaluable function."""
    def f(psi, phi):
        s = 0
        for mk, nk, a, b in zip(m, n, psi, phi):
            s = s + 1j * mk * a - nk * b
        return exp(s)
    return f


def weight_eigenvalue(m, n, l: int) -> complex:
    return (1j) ** l * sum(mk ** l - nk ** l for mk, nk in zip(m, n))
