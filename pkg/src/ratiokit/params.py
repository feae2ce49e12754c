"""Parameter records for the ratio average and the coset bookkeeping.

Parameters are stored as exponentials: ``xs[k] = exp(i psi_k)`` and
``ys[k] = exp(phi_k)``.  Indices are 0-based in code; error messages and
``DomainViolation.index`` report the 1-based position.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .errors import CapacityError, DomainViolation, ShapeError

DEFAULT_COSET_LIMIT = 10**6


def _as_complex_tuple(values, name):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ShapeError(f"{name}: expected [re, im] pairs, got {v!r}")
            v = complex(float(v[0]), float(v[1]))
        out.append(complex(v))
    return tuple(out)


def _check_counts(p, q, N):
    for name, v in (("p", p), ("q", q), ("N", N)):
        if int(v) != v:
            raise ValueError(f"{name} must be an integer, got {v!r}")
    if p < 0 or q < 0:
        raise ValueError(f"p and q must be non-negative (p={p}, q={q})")
    if N < 1:
        raise ValueError(f"N must be a positive integer, got {N}")


def _check_moduli(ys, p):
    for k, y in enumerate(ys):
        if k < p and not abs(y) < 1.0:
            raise DomainViolation(
                f"|y_{k + 1}| = {abs(y):.6g} must be < 1 (contracting slot, index {k + 1})",
                index=k + 1)
        if k >= p and not abs(y) > 1.0:
            raise DomainViolation(
                f"|y_{k + 1}| = {abs(y):.6g} must be > 1 (expanding slot, index {k + 1})",
                index=k + 1)


def _check_nonzero(xs):
    for k, x in enumerate(xs):
        if x == 0 or not cmath.isfinite(x):
            raise ValueError(f"x_{k + 1} must be a finite nonzero complex number, got {x!r}")


@dataclass(frozen=True)
class SpectralParams:
    """``p`` ratios in ``u``, ``q`` ratios in ``conj(u)``, matrix size ``N``.

    Construction validates; every instance satisfies the domain condition
    ``|y_j| < 1 < |y_l|`` for ``j < p <= l``.
    """

    p: int
    q: int
    N: int
    xs: tuple
    ys: tuple

    def __post_init__(self):
        object.__setattr__(self, "xs", _as_complex_tuple(self.xs, "xs"))
        object.__setattr__(self, "ys", _as_complex_tuple(self.ys, "ys"))
        _check_counts(self.p, self.q, self.N)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))
        object.__setattr__(self, "N", int(self.N))
        n = self.p + self.q
        if n < 1:
            raise ValueError("p + q must be at least 1")
        if len(self.xs) != n or len(self.ys) != n:
            raise ShapeError(
                f"expected {n} xs and {n} ys, got {len(self.xs)} and {len(self.ys)}")
        _check_nonzero(self.xs)
        _check_moduli(self.ys, self.p)

    @property
    def n(self):
        return self.p + self.q

    @classmethod
    def from_angles(cls, p, q, N, psi, phi):
        """Build from complex angles, ``x = exp(i psi)`` and ``y = exp(phi)``."""
        return cls(p, q, N, [cmath.exp(1j * a) for a in psi], [cmath.exp(b) for b in phi])

    def replace(self, **changes):
        fields = dict(p=self.p, q=self.q, N=self.N, xs=self.xs, ys=self.ys)
        fields.update(changes)
        return SpectralParams(**fields)

    def to_dict(self):
        return {
            "p": self.p, "q": self.q, "N": self.N,
            "xs": [[z.real, z.imag] for z in self.xs],
            "ys": [[z.real, z.imag] for z in self.ys],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return validate(json.loads(text))


@dataclass(frozen=True)
class ExtendedParams:
    """Unequal numerator/denominator counts.

    ``p`` factors ``Det(1 - x_j u)`` and ``q`` factors ``Det(1 - conj(u)/x_l)``
    in the numerator; ``pprime`` factors ``Det(1 - y_j u)`` and ``qprime``
    factors ``Det(1 - conj(u)/y_l)`` in the denominator.
    """

    p: int
    q: int
    pprime: int
    qprime: int
    N: int
    xs: tuple
    ys: tuple

    def __post_init__(self):
        object.__setattr__(self, "xs", _as_complex_tuple(self.xs, "xs"))
        object.__setattr__(self, "ys", _as_complex_tuple(self.ys, "ys"))
        _check_counts(self.p, self.q, self.N)
        _check_counts(self.pprime, self.qprime, self.N)
        for name in ("p", "q", "pprime", "qprime", "N"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if len(self.xs) != self.p + self.q:
            raise ShapeError(f"expected {self.p + self.q} xs, got {len(self.xs)}")
        if len(self.ys) != self.pprime + self.qprime:
            raise ShapeError(f"expected {self.pprime + self.qprime} ys, got {len(self.ys)}")
        if self.pprime > self.p + self.N:
            raise DomainViolation(
                f"pprime={self.pprime} exceeds p + N = {self.p + self.N}")
        if self.qprime > self.q + self.N:
            raise DomainViolation(
                f"qprime={self.qprime} exceeds q + N = {self.q + self.N}")
        _check_nonzero(self.xs)
        _check_moduli(self.ys, self.pprime)

    @classmethod
    def from_spectral(cls, params: SpectralParams):
        return cls(params.p, params.q, params.p, params.q, params.N, params.xs, params.ys)

    def to_dict(self):
        return {
            "p": self.p, "q": self.q, "pprime": self.pprime, "qprime": self.qprime,
            "N": self.N,
            "xs": [[z.real, z.imag] for z in self.xs],
            "ys": [[z.real, z.imag] for z in self.ys],
        }


def validate(raw) -> SpectralParams:
    """Validate a mapping (JSON-like) or an existing record.

    Raises DomainViolation, ShapeError or ValueError naming the violated
    condition.  Validating a SpectralParams returns an equal record.
    """
    if isinstance(raw, SpectralParams):
        return SpectralParams(raw.p, raw.q, raw.N, raw.xs, raw.ys)
    if isinstance(raw, Mapping):
        missing = {"p", "q", "N", "xs", "ys"} - set(raw)
        if missing:
            raise ShapeError(f"missing fields: {sorted(missing)}")
        return SpectralParams(raw["p"], raw["q"], raw["N"], raw["xs"], raw["ys"])
    raise TypeError(f"cannot validate object of type {type(raw).__name__}")


def validate_extended(raw) -> ExtendedParams:
    if isinstance(raw, ExtendedParams):
        return ExtendedParams(raw.p, raw.q, raw.pprime, raw.qprime, raw.N, raw.xs, raw.ys)
    if isinstance(raw, SpectralParams):
        return ExtendedParams.from_spectral(raw)
    if isinstance(raw, Mapping):
        if "pprime" not in raw and "qprime" not in raw:
            return ExtendedParams.from_spectral(validate(raw))
        return ExtendedParams(raw["p"], raw["q"], raw["pprime"], raw["qprime"], raw["N"],
                              raw["xs"], raw["ys"])
    raise TypeError(f"cannot validate object of type {type(raw).__name__}")


def highest_weight_multiplier(params: SpectralParams) -> complex:
    """``prod_{l >= p} (x_l / y_l)^N``; equals 1 when ``q == 0``."""
    out = 1.0 + 0.0j
    for l in range(params.p, params.n):
        out *= (params.xs[l] / params.ys[l]) ** params.N
    return out


@dataclass(frozen=True)
class CosetTable:
    """Representatives of ``S_{p+q} / (S_p x S_q)``.

    Each coset is a pair ``(J, L)`` of sorted 0-based index tuples: ``J`` are
    the x-indices placed in the first ``p`` slots, ``L`` those in the last
    ``q``.  The identity coset comes first.
    """

    p: int
    q: int
    cosets: tuple

    def __len__(self):
        return len(self.cosets)

    def __iter__(self):
        return iter(self.cosets)

    def __getitem__(self, i):
        return self.cosets[i]

    def one_based(self):
        return [(tuple(j + 1 for j in J), tuple(l + 1 for l in L)) for J, L in self.cosets]


_COSET_CACHE: dict = {}


def enumerate_cosets(p: int, q: int, limit: int = DEFAULT_COSET_LIMIT) -> CosetTable:
    """Identity coset first, then the rest in lexicographic order of ``L``."""
    n = p + q
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    size = math.comb(n, q)
    if size > limit:
        raise CapacityError(f"C({n},{q}) = {size} cosets exceeds the limit {limit}")
    key = (p, q)
    if key in _COSET_CACHE:
        return _COSET_CACHE[key]
    identity_L = tuple(range(p, n))
    rest = [L for L in combinations(range(n), q) if L != identity_L]
    cosets = []
    for L in [identity_L] + rest:
        J = tuple(k for k in range(n) if k not in L)
        cosets.append((J, L))
    table = CosetTable(p, q, tuple(cosets))
    _COSET_CACHE[key] = table
    return table


@dataclass(frozen=True)
class Weight:
    """Exponent vectors of ``exp(sum_k (i m_k psi_k - n_k phi_k))``."""

    m: tuple
    n: tuple

    def admissible(self, p: int, q: int, N: int) -> bool:
        """True when ``n_j <= 0 <= m_k <= N <= n_l`` for ``j < p <= l``."""
        if len(self.m) != p + q or len(self.n) != p + q:
            raise ShapeError("weight length must equal p + q")
        if any(mk < 0 or mk > N for mk in self.m):
            return False
        if any(nj > 0 for nj in self.n[:p]):
            return False
        return all(nl >= N for nl in self.n[p:])

    @classmethod
    def highest(cls, p: int, q: int, N: int) -> "Weight":
        return cls(tuple([0] * p + [N] * q), tuple([0] * p + [N] * q))

    def evaluate(self, psi: Sequence[complex], phi: Sequence[complex]) -> complex:
        s = sum(1j * mk * a - nk * b for mk, nk, a, b in zip(self.m, self.n, psi, phi))
        return cmath.exp(s)
