"""Exterior algebra over ``k <= 8`` odd generators and graded supermatrices.

An element is a dense table of ``2**k`` complex coefficients indexed by
bitmask: bit ``i`` set means generator ``theta_i`` is present, monomials
written in ascending generator order.  Batched kernels operate on arrays
whose last axis is this table, so matrices of elements have shape
``(..., m, n, 2**k)``.

Supermatrices follow the block layout ``[[A, B], [C, D]]`` where ``A``
acts on the odd subspace and ``D`` on the even one, hence
``STr = Tr D - Tr A`` (for even supermatrices) and ``SDet = Det D / Det(A - B D^-1 C)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import (FormMismatch, GeneratorMismatch, ParityError, ShapeError,
                     SingularBlock, SpectrumOnCircle)
from .haar_mc import mc_average, ratio_product, resolve_seed

MAX_GENERATORS = 8
FORM_TOL = 1e-12
PARITY_TOL = 1e-12
SINGULAR_COND = 1e13
CIRCLE_TOL = 1e-10


@lru_cache(maxsize=None)
def _tables(k: int):
    K = 1 << k
    ia, ib, ic, sg = [], [], [], []
    for I in range(K):
        for J in range(K):
            if I & J:
                continue
            # each generator of J moves past the larger generators of I
            swaps = sum(bin(I >> (b + 1)).count("1") for b in range(k) if J >> b & 1)
            ia.append(I)
            ib.append(J)
            ic.append(I | J)
            sg.append(-1.0 if swaps % 2 else 1.0)
    ia, ib, ic = (np.array(v, dtype=np.intp) for v in (ia, ib, ic))
    scatter = np.zeros((len(ic), K), dtype=complex)
    scatter[np.arange(len(ic)), ic] = sg
    return ia, ib, scatter


@lru_cache(maxsize=None)
def _degree(k: int) -> np.ndarray:
    return np.array([bin(I).count("1") for I in range(1 << k)])


def _k_of(K: int) -> int:
    k = K.bit_length() - 1
    if 1 << k != K:
        raise ShapeError(f"coefficient table length {K} is not a power of two")
    return k


def gprod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise graded product of coefficient arrays ``(..., 2**k)``."""
    k = _k_of(a.shape[-1])
    if b.shape[-1] != a.shape[-1]:
        raise GeneratorMismatch("operands have different generator counts")
    ia, ib, scatter = _tables(k)
    return (a[..., ia] * b[..., ib]) @ scatter


def gmatmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of element matrices ``(..., m, n, K) @ (..., n, r, K)``."""
    k = _k_of(A.shape[-1])
    if B.shape[-1] != A.shape[-1]:
        raise GeneratorMismatch("operands have different generator counts")
    ia, ib, scatter = _tables(k)
    prod = (A[..., :, :, None, ia] * B[..., None, :, :, ib]).sum(axis=-3)
    return prod @ scatter


def _scalar_left(S, M):
    return np.einsum("...ij,...jrk->...irk", S, M)


def _scalar_right(M, S):
    return np.einsum("...ijk,...jr->...irk", M, S)


def _identity(m, K, batch=()):
    out = np.zeros(batch + (m, m, K), dtype=complex)
    idx = np.arange(m)
    out[..., idx, idx, 0] = 1.0
    return out


def _check_body(M0, what):
    if M0.shape[-1] == 0:
        return
    cond = np.linalg.cond(M0)
    if not np.all(np.isfinite(cond)) or np.max(cond) > SINGULAR_COND:
        raise SingularBlock(f"numerical part of {what} is singular")


def ginv_matrix(M: np.ndarray, what="block") -> np.ndarray:
    """Inverse via ``M = M0 (1 + M0^-1 Mnil)`` and a terminating Neumann series."""
    K = M.shape[-1]
    k = _k_of(K)
    m = M.shape[-2]
    if m == 0:
        return M.copy()
    M0 = M[..., 0]
    _check_body(M0, what)
    inv0 = np.linalg.inv(M0)
    nil = M.copy()
    nil[..., 0] = 0
    Y = -_scalar_left(inv0, nil)
    term = _identity(m, K, M.shape[:-3])
    total = term.copy()
    for _ in range(k):
        term = gmatmul(term, Y)
        total = total + term
    return _scalar_right(total, inv0)


def gexp_nilpotent(t: np.ndarray) -> np.ndarray:
    """``exp`` of an even element with zero body (series ends at degree k)."""
    k = _k_of(t.shape[-1])
    out = np.zeros_like(t)
    out[..., 0] = 1.0
    term = out.copy()
    for r in range(1, k // 2 + 1):
        term = gprod(term, t) / r
        out = out + term
    return out


def ginv_element(a: np.ndarray) -> np.ndarray:
    """Inverse of elements with nonzero body."""
    k = _k_of(a.shape[-1])
    a0 = a[..., 0]
    if np.any(a0 == 0):
        raise SingularBlock("element with zero numerical part is not invertible")
    n = a / a0[..., None]
    n[..., 0] = 0
    out = np.zeros_like(a)
    out[..., 0] = 1.0
    term = out.copy()
    for _ in range(k):
        term = -gprod(term, n)
        out = out + term
    return out / a0[..., None]


def gdet(M: np.ndarray, what="block") -> np.ndarray:
    """Determinant of a matrix of even elements: ``Det M0 exp Tr log(1 + M0^-1 Mnil)``."""
    K = M.shape[-1]
    k = _k_of(K)
    m = M.shape[-2]
    batch = M.shape[:-3]
    if m == 0:
        out = np.zeros(batch + (K,), dtype=complex)
        out[..., 0] = 1.0
        return out
    M0 = M[..., 0]
    _check_body(M0, what)
    inv0 = np.linalg.inv(M0)
    nil = M.copy()
    nil[..., 0] = 0
    Y = _scalar_left(inv0, nil)
    log = np.zeros_like(Y)
    power = Y
    for r in range(1, k + 1):
        log = log + ((-1) ** (r + 1) / r) * power
        if r < k:
            power = gmatmul(power, Y)
    t = np.trace(log, axis1=-3, axis2=-2)
    return np.linalg.det(M0)[..., None] * gexp_nilpotent(t)


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class GrassmannElement:
    __slots__ = ("c", "k")

    def __init__(self, coeffs, k: Optional[int] = None):
        c = np.asarray(coeffs, dtype=complex).reshape(-1)
        kk = _k_of(c.size)
        if k is not None and k != kk:
            raise ShapeError(f"{c.size} coefficients do not match k={k}")
        if kk > MAX_GENERATORS:
            raise ShapeError(f"at most {MAX_GENERATORS} generators are supported")
        self.c = c
        self.k = kk

    @classmethod
    def scalar(cls, value, k: int):
        c = np.zeros(1 << k, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def generator(cls, i: int, k: int):
        """Generator ``theta_i`` (0-based)."""
        if not 0 <= i < k:
            raise ValueError(f"generator index {i} out of range for k={k}")
        c = np.zeros(1 << k, dtype=complex)
        c[1 << i] = 1.0
        return cls(c)

    @classmethod
    def monomial(cls, subset, k: int, coeff=1.0):
        """Product of the generators in ``subset`` taken in the given order."""
        out = cls.scalar(coeff, k)
        for i in subset:
            out = out * cls.generator(i, k)
        return out

    @property
    def body(self) -> complex:
        return complex(self.c[0])

    def coefficient(self, subset) -> complex:
        mask = 0
        for i in subset:
            mask |= 1 << i
        return complex(self.c[mask])

    def parity(self) -> Optional[int]:
        """0 or 1 for homogeneous elements, None for mixed ones."""
        deg = _degree(self.k) % 2
        nz = np.abs(self.c) > 0
        if not nz.any():
            return 0
        kinds = set(deg[nz].tolist())
        return kinds.pop() if len(kinds) == 1 else None

    def _other(self, other):
        if isinstance(other, GrassmannElement):
            if other.k != self.k:
                raise GeneratorMismatch(f"k={self.k} vs k={other.k}")
            return other.c
        if np.isscalar(other):
            c = np.zeros_like(self.c)
            c[0] = other
            return c
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GrassmannElement(self.c + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GrassmannElement(self.c - o)

    def __rsub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else GrassmannElement(o - self.c)

    def __neg__(self):
        return GrassmannElement(-self.c)

    def __mul__(self, other):
        if np.isscalar(other):
            return GrassmannElement(self.c * other)
        o = self._other(other)
        return o if o is NotImplemented else GrassmannElement(gprod(self.c, o))

    def __rmul__(self, other):
        if np.isscalar(other):
            return GrassmannElement(self.c * other)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return GrassmannElement(self.c / other)
        o = self._other(other)
        return o if o is NotImplemented else GrassmannElement(gprod(self.c, ginv_element(o)))

    def inverse(self):
        return GrassmannElement(ginv_element(self.c))

    def allclose(self, other, atol=1e-12):
        o = self._other(other)
        return bool(np.max(np.abs(self.c - o)) <= atol)

    def __repr__(self):
        parts = []
        for I in np.nonzero(self.c)[0]:
            gens = "".join(f"t{i}" for i in range(self.k) if I >> i & 1)
            parts.append(f"({self.c[I]:.6g}){gens}")
        return "GrassmannElement(" + (" + ".join(parts) or "0") + ")"


def gmul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    if a.k != b.k:
        raise GeneratorMismatch(f"k={a.k} vs k={b.k}")
    return GrassmannElement(gprod(a.c, b.c))


def random_element(k: int, rng: np.random.Generator, parity: Optional[int] = None,
                   scale=1.0, body=None, integer=False) -> GrassmannElement:
    K = 1 << k
    if integer:
        c = rng.integers(-3, 4, size=K).astype(complex)
    else:
        c = scale * (rng.standard_normal(K) + 1j * rng.standard_normal(K))
    if parity is not None:
        c[_degree(k) % 2 != parity] = 0
    if body is not None and (parity in (None, 0)):
        c[0] = body
    return GrassmannElement(c)


# ---------------------------------------------------------------------------
# supermatrices
# ---------------------------------------------------------------------------

def _as_block(X, m, n, K):
    if isinstance(X, np.ndarray) and X.ndim == 3:
        arr = X.astype(complex)
    else:
        arr = np.zeros((m, n, K), dtype=complex)
        rows = [] if X is None else list(X)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                arr[i, j] = v.c if isinstance(v, GrassmannElement) else np.eye(1, K, 0)[0] * v
    if arr.shape != (m, n, K):
        raise ShapeError(f"block shape {arr.shape[:2]} does not match ({m}, {n})")
    return arr


class Supermatrix:
    """``[[A, B], [C, D]]`` with ``A`` of size ``n1`` (odd) and ``D`` of size ``n0`` (even).

    Even supermatrices carry even A, D entries and odd B, C entries; odd
    supermatrices the reverse.  The grading is checked on construction.
    """

    def __init__(self, full: np.ndarray, n1: int, parity: int = 0, check=True):
        full = np.asarray(full, dtype=complex)
        if full.ndim != 3 or full.shape[0] != full.shape[1]:
            raise ShapeError("a supermatrix must be square")
        self.M = full
        self.n1 = int(n1)
        self.k = _k_of(full.shape[-1])
        self.parity = int(parity)
        if self.k > MAX_GENERATORS:
            raise ShapeError(f"at most {MAX_GENERATORS} generators are supported")
        if check:
            self._check_parity()

    @classmethod
    def from_blocks(cls, A, B, C, D, k: int, parity: int = 0):
        n1 = len(A) if not isinstance(A, np.ndarray) else A.shape[0]
        n0 = len(D) if not isinstance(D, np.ndarray) else D.shape[0]
        K = 1 << k
        top = np.concatenate([_as_block(A, n1, n1, K), _as_block(B, n1, n0, K)], axis=1)
        bot = np.concatenate([_as_block(C, n0, n1, K), _as_block(D, n0, n0, K)], axis=1)
        return cls(np.concatenate([top, bot], axis=0), n1, parity)

    @classmethod
    def diag(cls, a_diag, d_diag, k: int = 0):
        a_diag, d_diag = list(a_diag), list(d_diag)
        n1, n = len(a_diag), len(a_diag) + len(d_diag)
        M = np.zeros((n, n, 1 << k), dtype=complex)
        M[np.arange(n), np.arange(n), 0] = a_diag + d_diag
        return cls(M, n1, 0)

    @classmethod
    def random(cls, n1, n0, k, rng, parity=0, scale=0.3, body_shift=1.0, integer=False):
        n = n1 + n0
        K = 1 << k
        if integer:
            M = rng.integers(-3, 4, size=(n, n, K)).astype(complex)
        else:
            M = scale * (rng.standard_normal((n, n, K)) + 1j * rng.standard_normal((n, n, K)))
        odd = _degree(k) % 2 == 1
        block_odd = np.zeros((n, n), dtype=bool)
        block_odd[:n1, n1:] = True
        block_odd[n1:, :n1] = True
        want_odd = block_odd ^ bool(parity)
        M[want_odd[:, :, None] & ~odd] = 0
        M[~want_odd[:, :, None] & odd] = 0
        if parity == 0 and body_shift and not integer:
            M[np.arange(n), np.arange(n), 0] += body_shift
        return cls(M, n1, parity)

    @property
    def n0(self):
        return self.M.shape[0] - self.n1

    @property
    def A(self):
        return self.M[:self.n1, :self.n1]

    @property
    def B(self):
        return self.M[:self.n1, self.n1:]

    @property
    def C(self):
        return self.M[self.n1:, :self.n1]

    @property
    def D(self):
        return self.M[self.n1:, self.n1:]

    def _check_parity(self):
        odd = _degree(self.k) % 2 == 1
        n = self.M.shape[0]
        block_odd = np.zeros((n, n), dtype=bool)
        block_odd[:self.n1, self.n1:] = True
        block_odd[self.n1:, :self.n1] = True
        want_odd = block_odd ^ bool(self.parity)
        bad = np.where(want_odd[:, :, None], ~odd, odd)
        scale = max(1.0, float(np.abs(self.M).max(initial=0.0)))
        if np.abs(self.M[bad]).max(initial=0.0) > PARITY_TOL * scale:
            raise ParityError(f"entries violate the grading of a parity-{self.parity} supermatrix")

    def _compatible(self, other):
        if not isinstance(other, Supermatrix):
            raise TypeError("expected a Supermatrix")
        if other.k != self.k:
            raise GeneratorMismatch(f"k={self.k} vs k={other.k}")
        if other.n1 != self.n1 or other.M.shape != self.M.shape:
            raise ShapeError("supermatrix block sizes differ")

    def __matmul__(self, other):
        self._compatible(other)
        return Supermatrix(gmatmul(self.M, other.M), self.n1, (self.parity + other.parity) % 2)

    def __add__(self, other):
        self._compatible(other)
        if other.parity != self.parity:
            raise ParityError("cannot add supermatrices of different parity")
        return Supermatrix(self.M + other.M, self.n1, self.parity)

    def __sub__(self, other):
        self._compatible(other)
        if other.parity != self.parity:
            raise ParityError("cannot subtract supermatrices of different parity")
        return Supermatrix(self.M - other.M, self.n1, self.parity)

    def scale(self, s: complex):
        return Supermatrix(self.M * s, self.n1, self.parity)

    def inverse(self):
        if self.parity != 0:
            raise ParityError("only even supermatrices are invertible")
        return Supermatrix(ginv_matrix(self.M, "supermatrix"), self.n1, 0)

    def conjugate(self, G: "Supermatrix"):
        """``G X G^-1``."""
        return G @ self @ G.inverse()

    def body(self) -> np.ndarray:
        return self.M[..., 0]


def supertrace(X: Supermatrix) -> GrassmannElement:
    """``Tr D - Tr A`` for even ``X``; ``Tr D + Tr A`` for odd ``X``.

    The parity-dependent sign is what keeps ``STr[X, Y] = 0`` for mixed
    parities when products are plain matrix products.
    """
    if X.M.shape[0] != X.M.shape[1]:
        raise ShapeError("supertrace needs a square supermatrix")
    sign = 1 if X.parity else -1
    return GrassmannElement(np.trace(X.D, axis1=0, axis2=1) + sign * np.trace(X.A, axis1=0, axis2=1))


def bracket(X: Supermatrix, Y: Supermatrix) -> Supermatrix:
    """Supercommutator ``XY - (-1)^(|X||Y|) YX``."""
    sign = -1 if X.parity and Y.parity else 1
    return Supermatrix(gmatmul(X.M, Y.M) - sign * gmatmul(Y.M, X.M), X.n1,
                       (X.parity + Y.parity) % 2)


def _sdet_forms(M, n1):
    A, B = M[..., :n1, :n1, :], M[..., :n1, n1:, :]
    C, D = M[..., n1:, :n1, :], M[..., n1:, n1:, :]
    Dinv = ginv_matrix(D, "D")
    Ainv = ginv_matrix(A, "A")
    S1 = A - gmatmul(gmatmul(B, Dinv), C)
    S2 = D - gmatmul(gmatmul(C, Ainv), B)
    f1 = gprod(gdet(D, "D"), ginv_element(gdet(S1, "A - B D^-1 C")))
    f2 = gprod(gdet(S2, "D - C A^-1 B"), ginv_element(gdet(A, "A")))
    return f1, f2


def sdet(X: Supermatrix, tol: float = FORM_TOL) -> GrassmannElement:
    """Superdeterminant, cross-checked between its two block forms."""
    if X.parity != 0:
        raise ParityError("sdet is defined for even supermatrices")
    f1, f2 = _sdet_forms(X.M, X.n1)
    scale = max(1.0, float(np.abs(f1).max()))
    gap = float(np.abs(f1 - f2).max())
    if gap > tol * scale:
        raise FormMismatch(f"the two superdeterminant forms differ by {gap:.3g}")
    return GrassmannElement(f1)


def _sdet_inv(M, n1):
    """``Det(A - B D^-1 C) / Det(D)`` over a batch, without the cross-check."""
    A, B = M[..., :n1, :n1, :], M[..., :n1, n1:, :]
    C, D = M[..., n1:, :n1, :], M[..., n1:, n1:, :]
    S1 = A - gmatmul(gmatmul(B, ginv_matrix(D, "D")), C)
    return gprod(gdet(S1, "A - B D^-1 C"), ginv_element(gdet(D, "D")))


def _body_spectra(X: Supermatrix):
    A0, D0 = X.A[..., 0], X.D[..., 0]
    if not np.count_nonzero(A0 - np.diag(np.diag(A0))):
        a = np.diag(A0)
    else:
        a = np.linalg.eigvals(A0)
    if not np.count_nonzero(D0 - np.diag(np.diag(D0))):
        d = np.diag(D0)
    else:
        d = np.linalg.eigvals(D0)
    if d.size and np.abs(np.abs(d) - 1.0).min() < CIRCLE_TOL:
        raise SpectrumOnCircle("a numerical D eigenvalue lies on the unit circle")
    if len(a) != len(d):
        raise ShapeError("the Haar integrand needs a (n|n) supermatrix")
    return a, d


def _kron_batch(X: Supermatrix, lam: np.ndarray) -> np.ndarray:
    """Rows of ``SDet(Id - X (x) u)^-1`` for eigenvalue rows ``lam`` of shape ``(S, N)``."""
    a, d = _body_spectra(X)
    body = ratio_product(a, d, lam)
    K = X.M.shape[-1]
    if K == 1:
        return body[:, None]
    n = X.M.shape[0]
    lam = np.atleast_2d(lam)
    Id = _identity(n, K)
    M = Id[None, None] - lam[:, :, None, None, None] * X.M[None, None]
    g = _sdet_inv(M, X.n1)
    corr = g / g[..., :1]
    acc = corr[:, 0]
    for a_ in range(1, corr.shape[1]):
        acc = gprod(acc, corr[:, a_])
    return body[:, None] * acc


def sdet_inv_id_minus_kron(X: Supermatrix, sample) -> GrassmannElement:
    """``SDet(Id - X (x) u)^-1`` from the spectrum of ``u``.

    The Kronecker product is block diagonal in an eigenbasis of ``u``, so
    the result is the product over eigenvalues of ``SDet(Id - lam X)^-1``.
    The numerical part is the plain ratio product over the block spectra;
    the nilpotent correction has unit body.
    """
    if X.parity != 0:
        raise ParityError("X must be even")
    lam = getattr(sample, "eigenvalues", sample)
    lam = np.asarray(lam, dtype=complex).reshape(1, -1)
    return GrassmannElement(_kron_batch(X, lam)[0])


@dataclass(frozen=True)
class GrassmannEstimate:
    mean: GrassmannElement
    stderr: np.ndarray
    samples: int
    seed: int

    @property
    def body(self) -> complex:
        return self.mean.body

    @property
    def body_stderr(self) -> float:
        return float(self.stderr[0])


def grassmann_character_mc(X: Supermatrix, N: int, samples: int, seed: Optional[int] = None,
                           workers: int = 1) -> GrassmannEstimate:
    """Coefficientwise Haar average of :func:`sdet_inv_id_minus_kron`."""
    if X.parity != 0:
        raise ParityError("X must be even")
    _body_spectra(X)
    est = mc_average(lambda lam: _kron_batch(X, lam), N, samples, resolve_seed(seed), workers)
    return GrassmannEstimate(GrassmannElement(est.mean), est.stderr, est.samples, est.seed)

