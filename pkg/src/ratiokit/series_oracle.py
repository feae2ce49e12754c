"""Torus-integral oracle for the Haar average.

For a class function the Haar integral over U(N) reduces to an N-fold
torus average against ``|Delta(z)|^2 / N!``.  The integrand factorises
into ``prod_a f(z_a)``; each ``f`` is expanded as a Laurent polynomial
(denominators truncated as geometric series) and the constant term of the
product with ``|Delta|^2`` is read off by integer exponent matching.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .errors import CapacityError, TruncationTooCoarse
from .params import ExtendedParams, SpectralParams, highest_weight_multiplier

MAX_P = 2
MAX_Q = 2
MAX_N = 3
MAX_ORDER = 4000


@dataclass(frozen=True)
class Laurent:
    """Coefficients ``c[k]`` of ``z^(k + low)``."""

    low: int
    c: np.ndarray

    def __mul__(self, other: "Laurent") -> "Laurent":
        return Laurent(self.low + other.low, np.convolve(self.c, other.c))

    def coeff(self, e: int) -> complex:
        k = e - self.low
        return complex(self.c[k]) if 0 <= k < len(self.c) else 0j

    @classmethod
    def one(cls):
        return cls(0, np.ones(1, dtype=complex))


def _factor_series(params):
    """Split into (numerator roots in z, numerator roots in 1/z, denominator ratios)."""
    if isinstance(params, ExtendedParams):
        p, q, pp, qp = params.p, params.q, params.pprime, params.qprime
    else:
        p, q, pp, qp = params.p, params.q, params.p, params.q
    xs, ys = params.xs, params.ys
    num_pos = [xs[j] for j in range(p)]
    num_neg = [1 / xs[l] for l in range(p, p + q)]
    den_pos = [ys[j] for j in range(pp)]
    den_neg = [1 / ys[l] for l in range(pp, pp + qp)]
    return num_pos, num_neg, den_pos, den_neg


def _sup_numerator(params):
    num_pos, num_neg, _, _ = _factor_series(params)
    return math.prod(1 + abs(a) for a in num_pos + num_neg)


def _prefactor(params):
    return 1.0 + 0j if isinstance(params, ExtendedParams) else highest_weight_multiplier(params)


def tail_bound(params, order: int) -> float:
    """Guaranteed bound on ``|truncated - exact|`` at the given series order.

    With ``r`` the largest geometric ratio, ``K`` denominator factors and
    ``P`` the sup of the numerator on the circle, one truncated factor
    errs by at most ``P K r^(M+1) / (1-r)^K`` and is bounded by
    ``B = P / (1-r)^K``; the N-fold product errs by at most
    ``N B^(N-1)`` times that, and the Weyl weight has unit mass.
    """
    _, _, den_pos, den_neg = _factor_series(params)
    ratios = [abs(a) for a in den_pos + den_neg]
    K = len(ratios)
    if K == 0:
        return 0.0
    r = max(ratios)
    if r == 0:
        return 0.0
    P = _sup_numerator(params)
    B = P / (1 - r) ** K
    one = P * K * r ** (order + 1) / (1 - r) ** K
    N = params.N
    return float(abs(_prefactor(params)) * N * B ** (N - 1) * one)


@dataclass(frozen=True)
class TruncationPolicy:
    order: int
    bound: float = math.inf

    @classmethod
    def for_params(cls, params, order: int) -> "TruncationPolicy":
        if order < params.N:
            raise ValueError(f"order {order} must be >= N = {params.N}")
        return cls(order, tail_bound(params, order))

    @classmethod
    def for_tolerance(cls, params, tol: float = 1e-13, max_order: int = MAX_ORDER):
        order = max(params.N, 8)
        while tail_bound(params, order) > tol:
            if order >= max_order:
                raise TruncationTooCoarse(
                    f"no order <= {max_order} reaches tail bound {tol:g}")
            order = min(2 * order, max_order)
        return cls.for_params(params, order)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    order: int
    bound: float
    diagnostics: dict = field(default_factory=dict)

    def __complex__(self):
        return complex(self.value)


def single_factor(params, order: int) -> Laurent:
    """Truncated Laurent expansion of the one-eigenvalue factor ``f(z)``."""
    num_pos, num_neg, den_pos, den_neg = _factor_series(params)
    out = Laurent.one()
    for a in num_pos:
        out = out * Laurent(0, np.array([1, -a], dtype=complex))
    for a in num_neg:
        out = out * Laurent(-1, np.array([-a, 1], dtype=complex))
    m = np.arange(order + 1)
    for a in den_pos:
        out = out * Laurent(0, np.asarray(a, dtype=complex) ** m)
    for a in den_neg:
        out = out * Laurent(-order, (np.asarray(a, dtype=complex) ** m)[::-1])
    return out


@lru_cache(maxsize=None)
def vandermonde_square(N: int) -> dict:
    """``Delta(z) Delta(1/z)`` as ``{exponent tuple: integer coefficient}``."""
    terms: dict = {}
    perms = list(permutations(range(N)))

    def sign(s):
        inv = sum(1 for i in range(N) for j in range(i + 1, N) if s[i] > s[j])
        return -1 if inv % 2 else 1

    for s in perms:
        for t in perms:
            e = tuple(s[a] - t[a] for a in range(N))
            terms[e] = terms.get(e, 0) + sign(s) * sign(t)
    return {e: c for e, c in terms.items() if c}


def _check_capacity(params, max_p, max_q, max_n):
    counts = (params.p, params.q)
    if isinstance(params, ExtendedParams):
        counts = (max(params.p, params.pprime), max(params.q, params.qprime))
    if counts[0] > max_p or counts[1] > max_q or params.N > max_n:
        raise CapacityError(
            f"(p, q, N) = ({counts[0]}, {counts[1]}, {params.N}) exceeds oracle capacity "
            f"({max_p}, {max_q}, {max_n})")


def torus_average(params, policy: Optional[TruncationPolicy] = None, *,
                  tol: Optional[float] = None, max_p=MAX_P, max_q=MAX_Q, max_n=MAX_N) -> SeriesResult:
    """Haar average via constant-term extraction on the torus.

    For :class:`SpectralParams` the highest-weight multiplier is included
    (same normalisation as the coset formula); for :class:`ExtendedParams`
    the plain ratio average is returned.
    """
    _check_capacity(params, max_p, max_q, max_n)
    if policy is None:
        policy = TruncationPolicy.for_tolerance(params, 1e-13 if tol is None else tol)
    elif policy.order < params.N:
        raise ValueError(f"order {policy.order} must be >= N = {params.N}")
    bound = tail_bound(params, policy.order)
    if tol is not None and bound > tol:
        raise TruncationTooCoarse(f"tail bound {bound:.3g} exceeds tolerance {tol:.3g}")
    f = single_factor(params, policy.order)
    N = params.N
    total = 0j
    for e, c in vandermonde_square(N).items():
        term = complex(c)
        for ea in e:
            term *= f.coeff(-ea)
        total += term
    value = _prefactor(params) * total / math.factorial(N)
    return SeriesResult(value, policy.order, bound,
                        {"vandermonde_terms": len(vandermonde_square(N)), "width": len(f.c)})


def residue_average_n1(params: SpectralParams) -> complex:
    """Closed residue sum for ``N = 1``: ``1 - sum_l R_l`` over the poles ``1/y_l``."""
    if params.N != 1:
        raise ValueError("residue oracle is specific to N = 1")
    xs, ys, p = params.xs, params.ys, params.p
    total = 1.0 + 0j
    for l in range(p, params.n):
        num = math.prod((1 - x / ys[l]) for x in xs)
        den = math.prod((1 - ys[k] / ys[l]) for k in range(params.n) if k != l)
        total -= num / den
    return total
