"""Exact evaluation of the coset-sum character formula and its limits.

The per-coset term functions only use ``+ - * /`` and integer powers, so
the same code evaluates complex numbers, :class:`ratiokit.jets.Jet`
objects (for exact derivatives) and ``mpmath.mpc`` values (extended
precision).  Complex sums are accumulated with ``math.fsum`` on the real
and imaginary parts, which makes the result independent of term order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import DomainViolation, ExtrapolationUnstable, ShapeError, SingularInput
from .params import (
    DEFAULT_COSET_LIMIT,
    ExtendedParams,
    SpectralParams,
    enumerate_cosets,
    validate_extended,
)

CLUSTER_TOL = 1e-6
EXTENDED_THRESHOLD = 1e8
EXTENDED_DPS = 40


@dataclass(frozen=True)
class EvalResult:
    value: complex
    method: str = "direct"
    condition: float = 1.0
    terms: Optional[tuple] = None
    precision: str = "double"
    diagnostics: dict = field(default_factory=dict)

    def __complex__(self):
        return complex(self.value)


# ---------------------------------------------------------------------------
# per-coset terms (generic arithmetic)
# ---------------------------------------------------------------------------

def thm1_term(xs, ys, p, N, J, L):
    """One coset of the full formula; y-roles stay fixed, only x's move."""
    pref = 1
    for b, l in enumerate(L):
        pref = pref * (xs[l] / ys[p + b]) ** N
    num = 1
    den = 1
    for a, j in enumerate(J):
        for b, l in enumerate(L):
            num = num * (1 - ys[a] / xs[l]) * (1 - xs[j] / ys[p + b])
            den = den * (1 - xs[j] / xs[l]) * (1 - ys[a] / ys[p + b])
    return pref * num / den


def compact_term(xs, N, J, L):
    pref = 1
    for l in L:
        pref = pref * xs[l] ** N
    den = 1
    for j in J:
        for l in L:
            den = den * (1 - xs[j] / xs[l])
    return pref / den


def cor12_term(xs, ys, p, pprime, N, J, L):
    pref = 1
    for b, l in enumerate(L):
        pref = pref * (xs[l] / xs[p + b]) ** N
    qprime = len(ys) - pprime
    num = 1
    den = 1
    for jp in range(pprime):
        for l in L:
            num = num * (1 - ys[jp] / xs[l])
    for j in J:
        for lp in range(qprime):
            num = num * (1 - xs[j] / ys[pprime + lp])
    for j in J:
        for l in L:
            den = den * (1 - xs[j] / xs[l])
    for jp in range(pprime):
        for lp in range(qprime):
            den = den * (1 - ys[jp] / ys[pprime + lp])
    return pref * num / den


def thm1_generic(xs, ys, p, q, N):
    """Plain coset sum for non-float arithmetic (jets, mpmath)."""
    total = 0
    for J, L in enumerate_cosets(p, q):
        total = total + thm1_term(xs, ys, p, N, J, L)
    return total


# ---------------------------------------------------------------------------
# summation and clustering
# ---------------------------------------------------------------------------

def _fsum_complex(terms):
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def _condition(terms, total):
    mag = math.fsum(abs(t) for t in terms)
    if mag == 0:
        return 1.0
    if total == 0:
        return math.inf
    return max(1.0, mag / abs(total))


def find_clusters(xs, tol=CLUSTER_TOL):
    """Groups of indices linked by ``|1 - x_a / x_b| < tol`` (size >= 2 only)."""
    n = len(xs)
    parent = list(range(n))

    def root(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if abs(1 - xs[a] / xs[b]) < tol:
                parent[root(b)] = root(a)
    groups = {}
    for a in range(n):
        groups.setdefault(root(a), []).append(a)
    return [tuple(g) for g in groups.values() if len(g) > 1]


def _has_exact_coincidence(xs):
    return any(xs[a] == xs[b] for a in range(len(xs)) for b in range(a + 1, len(xs)))


def _direct(term_fn, cosets, keep_terms, precision):
    if precision == "extended":
        return _direct_extended(term_fn, cosets, keep_terms)
    try:
        terms = [complex(term_fn(J, L)) for J, L in cosets]
    except ZeroDivisionError as exc:
        raise SingularInput(f"vanishing denominator: {exc}") from None
    bad = [t for t in terms if not (math.isfinite(t.real) and math.isfinite(t.imag))]
    if bad:
        raise SingularInput("non-finite coset term (vanishing denominator)")
    total = _fsum_complex(terms)
    cond = _condition(terms, total)
    return EvalResult(total, "direct", cond, tuple(terms) if keep_terms else None)


def _direct_extended(term_fn, cosets, keep_terms):
    import mpmath

    with mpmath.workdps(EXTENDED_DPS):
        try:
            terms = [term_fn(J, L) for J, L in cosets]
        except ZeroDivisionError as exc:
            raise SingularInput(f"vanishing denominator: {exc}") from None
        total = mpmath.fsum(terms)
        mag = mpmath.fsum(abs(t) for t in terms)
        cond = float(mag / abs(total)) if total != 0 else math.inf
        value = complex(total)
        out_terms = tuple(complex(t) for t in terms) if keep_terms else None
    return EvalResult(value, "direct", max(1.0, cond), out_terms, precision="extended")


def _to_mp(values):
    import mpmath
    return [mpmath.mpc(v.real, v.imag) for v in values]


def _evaluate(make_term, xs, ys, cosets, *, confluent, cluster_tol, precision, keep_terms,
              coupled):
    """Shared driver: clustering check, direct sum, optional extended pass.

    ``make_term(xs, ys)`` returns a function ``(J, L) -> term``.
    ``coupled`` is False when no x-x denominators exist (q == 0 or p == 0).
    """
    if coupled and find_clusters(xs, cluster_tol):
        if confluent:
            return _confluent(lambda xx: _evaluate(
                make_term, xx, ys, cosets, confluent=False, cluster_tol=cluster_tol,
                precision=precision, keep_terms=False, coupled=False), xs, cluster_tol)
        if _has_exact_coincidence(xs):
            raise SingularInput("exact coincidence x_a == x_b with confluent handling disabled")
    if precision == "extended":
        return _direct(make_term(_to_mp(xs), _to_mp(ys)), cosets, keep_terms, "extended")
    res = _direct(make_term(xs, ys), cosets, keep_terms, "double")
    if precision == "auto" and res.condition > EXTENDED_THRESHOLD:
        ext = _direct(make_term(_to_mp(xs), _to_mp(ys)), cosets, keep_terms, "extended")
        return EvalResult(ext.value, "direct", ext.condition, ext.terms, "extended",
                          {"double_condition": res.condition})
    return res


def _perturbed(xs, clusters, h):
    out = list(xs)
    for group in clusters:
        rep = xs[group[0]]
        for k, idx in enumerate(group):
            out[idx] = xs[idx] + h * k * 1j * rep
    return out


def _confluent(evaluate: Callable, xs, tol, eps=None):
    clusters = find_clusters(xs, tol)
    if not clusters:
        return evaluate(list(xs))
    eps = max(1e-3, 10 * tol) if eps is None else eps
    # the value is analytic in h; averaging +h and -h removes odd powers
    runs = {}
    for h in (eps, -eps, eps / 2, -eps / 2):
        runs[h] = evaluate(_perturbed(xs, clusters, h))
    g1 = (runs[eps].value + runs[-eps].value) / 2
    g2 = (runs[eps / 2].value + runs[-eps / 2].value) / 2
    value = (4 * g2 - g1) / 3
    residual = abs(value - g2) / max(1.0, abs(value))
    if residual > 1e3 * tol:
        raise ExtrapolationUnstable(
            f"extrapolation residual {residual:.3g} exceeds {1e3 * tol:.3g}")
    return EvalResult(value, "confluent-extrapolated", max(r.condition for r in runs.values()),
                      None, runs[eps].precision,
                      {"eps": eps, "residual": residual, "clusters": clusters})


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def eval_thm1(params: SpectralParams, *, confluent=True, cluster_tol=CLUSTER_TOL,
              precision="double", keep_terms=False,
              coset_limit=DEFAULT_COSET_LIMIT) -> EvalResult:
    """Haar average of the ratio product via the coset sum.

    ``precision`` is ``"double"``, ``"extended"`` (mpmath) or ``"auto"``
    (extended re-evaluation when the cancellation estimate exceeds 1e8).
    Near-coincident x's (``|1 - x_a/x_b| < cluster_tol``) are delegated to
    the confluent extrapolation unless ``confluent=False``.
    """
    p, q, N = params.p, params.q, params.N
    cosets = enumerate_cosets(p, q, coset_limit)
    return _evaluate(lambda xs, ys: (lambda J, L: thm1_term(xs, ys, p, N, J, L)),
                     list(params.xs), list(params.ys), cosets, confluent=confluent,
                     cluster_tol=cluster_tol, precision=precision, keep_terms=keep_terms,
                     coupled=p > 0 and q > 0)


def eval_confluent(params: SpectralParams, tol=CLUSTER_TOL, eps=None,
                   precision="double") -> EvalResult:
    """Value at or near coinciding x's by Richardson extrapolation.

    Cluster members are shifted by ``h*k*i*x_rep`` (k = 0, 1, ...) at
    ``h = +-eps`` and ``+-eps/2``.  The symmetric average is even in ``h``
    and one Richardson step removes the ``h^2`` term.  Inputs
    without clusters pass straight through to :func:`eval_thm1`.
    """
    p, q, N = params.p, params.q, params.N
    cosets = enumerate_cosets(p, q)
    ys = list(params.ys)

    def evaluate(xs):
        return _evaluate(lambda xx, yy: (lambda J, L: thm1_term(xx, yy, p, N, J, L)),
                         xs, ys, cosets, confluent=False, cluster_tol=tol,
                         precision=precision, keep_terms=False, coupled=False)

    if not (p and q) or not find_clusters(params.xs, tol):
        return eval_thm1(params, confluent=False, cluster_tol=tol, precision=precision)
    return _confluent(evaluate, list(params.xs), tol, eps)


def eval_cor12(params, *, confluent=True, cluster_tol=CLUSTER_TOL,
               precision="double", keep_terms=False) -> EvalResult:
    """Unequal-count average (no highest-weight multiplier on either side)."""
    params = validate_extended(params)
    p, q, pp, N = params.p, params.q, params.pprime, params.N
    cosets = enumerate_cosets(p, q)
    return _evaluate(lambda xs, ys: (lambda J, L: cor12_term(xs, ys, p, pp, N, J, L)),
                     list(params.xs), list(params.ys), cosets, confluent=confluent,
                     cluster_tol=cluster_tol, precision=precision, keep_terms=keep_terms,
                     coupled=p > 0 and q > 0)


def eval_compact(p: int, q: int, N: int, xs: Sequence[complex], *, confluent=True,
                 cluster_tol=CLUSTER_TOL, precision="double", keep_terms=False) -> EvalResult:
    """Compact-sector limit: all y's removed."""
    xs = [complex(x) for x in xs]
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    if N < 1:
        raise ValueError("N must be a positive integer")
    if len(xs) != p + q:
        raise ShapeError(f"expected {p + q} xs, got {len(xs)}")
    if any(x == 0 for x in xs):
        raise ValueError("xs must be nonzero")
    cosets = enumerate_cosets(p, q)
    return _evaluate(lambda xx, yy: (lambda J, L: compact_term(xx, N, J, L)),
                     xs, [], cosets, confluent=confluent, cluster_tol=cluster_tol,
                     precision=precision, keep_terms=keep_terms, coupled=p > 0 and q > 0)


def eval_stable(p: int, q: int, N: int, ys: Sequence[complex]) -> EvalResult:
    """Pure-reciprocal average in the stable range ``N >= max(p, q)``.

    Includes the ``prod y_l^(-N)`` factor of the highest weight.
    """
    ys = [complex(y) for y in ys]
    if len(ys) != p + q:
        raise ShapeError(f"expected {p + q} ys, got {len(ys)}")
    if N < max(p, q):
        raise DomainViolation(f"N={N} is below the stable range max(p, q)={max(p, q)}")
    for k, y in enumerate(ys):
        if (k < p and not abs(y) < 1) or (k >= p and not abs(y) > 1):
            raise DomainViolation(f"y_{k + 1} violates the modulus condition", index=k + 1)
    value = 1.0 + 0j
    for l in range(p, p + q):
        value *= ys[l] ** (-N)
    for j in range(p):
        for l in range(p, p + q):
            value /= (1 - ys[j] / ys[l])
    return EvalResult(value, "direct", 1.0)
