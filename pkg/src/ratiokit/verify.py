"""Acceptance suites.

Each criterion is a function ``(seed, workers) -> CriterionResult``; the
report holds only deterministic quantities (no timings), so the same seed
gives the same bytes for any worker count.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List

import numpy as np

from . import formula, grassmann, haar_mc, radial, series_oracle, spectra
from .errors import FormMismatch
from .jets import exp as jexp
from .params import ExtendedParams, SpectralParams, highest_weight_multiplier

GOLDEN = SpectralParams(1, 1, 1, (2, 3), (0.5, 4))
GRID = [(1, 1), (2, 1), (1, 2), (2, 2)]


@dataclass(frozen=True)
class CriterionResult:
    id: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.id:2d} {self.name:<22s} {flag}  "
                f"measured={self.measured:.3e} tol={self.tolerance:.1e}  {self.detail}").rstrip()


def _rng(seed, cid, salt=0):
    return np.random.default_rng([int(seed) & ((1 << 63) - 1), cid, salt])


def _separated_phases(n, rng, gap=0.3):
    while True:
        ph = rng.uniform(0, 2 * math.pi, n)
        d = [abs(math.remainder(a - b, 2 * math.pi)) for i, a in enumerate(ph) for b in ph[:i]]
        if not d or min(d) > gap:
            return ph


def random_params(p, q, N, rng, unit_circle=False) -> SpectralParams:
    """Moderate random parameters: ``|y_j|`` in [0.2, 0.6], ``|y_l|`` in [1/0.6, 5]."""
    n = p + q
    ph = _separated_phases(n, rng)
    mod = np.ones(n) if unit_circle else rng.uniform(0.5, 2.0, n)
    xs = [m * complex(math.cos(a), math.sin(a)) for m, a in zip(mod, ph)]
    ymod = np.concatenate([rng.uniform(0.2, 0.6, p), rng.uniform(1 / 0.6, 5.0, q)])
    yph = rng.uniform(0, 2 * math.pi, n)
    ys = [m * complex(math.cos(a), math.sin(a)) for m, a in zip(ymod, yph)]
    return SpectralParams(p, q, N, xs, ys)


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def c1_golden(seed, workers):
    v = formula.eval_thm1(GOLDEN).value
    err = abs(v - 6 / 7)
    return CriterionResult(1, "golden value", err <= 1e-12, err, 1e-12, "p=q=N=1 -> 6/7")


def c2_trivial(seed, workers):
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(20):
        p, q = GRID[rng.integers(len(GRID))]
        N = int(rng.integers(1, 6))
        P = random_params(p, q, N, rng)
        P = P.replace(xs=P.ys)
        worst = max(worst, abs(formula.eval_thm1(P).value - 1))
    return CriterionResult(2, "trivial identity", worst <= 1e-12, worst, 1e-12, "20 sets, x = y")


def c3_oracles(seed, workers, samples=100_000, sets=5):
    rng = _rng(seed, 3)
    worst_series = 0.0
    worst_sigma = 0.0
    for p, q in GRID:
        for N in (1, 2, 3):
            for s in range(sets):
                P = random_params(p, q, N, rng)
                v = formula.eval_thm1(P).value
                ser = series_oracle.torus_average(P)
                gate = max(1e-8, ser.bound) * max(1.0, abs(v))
                worst_series = max(worst_series, abs(ser.value - v) / gate)
                est = haar_mc.mc_estimate(P, samples, seed=int(rng.integers(2**62)), workers=workers)
                z = max(abs((est.mean - v).real), abs((est.mean - v).imag)) / est.stderr
                worst_sigma = max(worst_sigma, z)
    ok = worst_series <= 1 and worst_sigma <= 4
    return CriterionResult(3, "oracle triangle", ok, worst_series, 1.0,
                           f"series gap / max(1e-8, tail bound); MC worst {worst_sigma:.2f} sigma (gate 4)")


def c4_cor12(seed, workers, samples=100_000):
    rng = _rng(seed, 4)
    worst = 0.0
    for p, q in GRID:
        for N in (1, 2, 3):
            P = random_params(p, q, N, rng)
            ref = formula.eval_thm1(P).value / highest_weight_multiplier(P)
            worst = max(worst, _rel(formula.eval_cor12(ExtendedParams.from_spectral(P)).value, ref))
    boundary = [(1, 0, 2, 0, 1), (0, 1, 0, 2, 1), (1, 1, 2, 1, 1), (1, 1, 1, 2, 1), (1, 0, 3, 0, 2)]
    worst_sigma = 0.0
    for p, q, pp, qp, N in boundary:
        ph = _separated_phases(p + q, rng)
        xs = [rng.uniform(0.5, 2) * complex(math.cos(a), math.sin(a)) for a in ph]
        ys = [rng.uniform(0.2, 0.6) * complex(math.cos(a), math.sin(a))
              for a in rng.uniform(0, 2 * math.pi, pp)]
        ys += [rng.uniform(1 / 0.6, 5) * complex(math.cos(a), math.sin(a))
               for a in rng.uniform(0, 2 * math.pi, qp)]
        E = ExtendedParams(p, q, pp, qp, N, xs, ys)
        v = formula.eval_cor12(E).value
        est = haar_mc.mc_estimate(E, samples, seed=int(rng.integers(2**62)), workers=workers)
        z = max(abs((est.mean - v).real), abs((est.mean - v).imag)) / est.stderr
        worst_sigma = max(worst_sigma, z)
    ok = worst <= 1e-12 and worst_sigma <= 4
    return CriterionResult(4, "unequal counts", ok, worst, 1e-12,
                           f"boundary MC worst {worst_sigma:.2f} sigma (gate 4)")


def c5_compact(seed, workers):
    a = abs(formula.eval_compact(1, 1, 2, (0.3, 0.7)).value - 0.79)
    b = abs(formula.eval_compact(1, 1, 2, (0.3, 0.3)).value - 0.27)
    ok = a <= 1e-12 and b <= 1e-6
    return CriterionResult(5, "compact sector", ok, a, 1e-12, f"confluent gap {b:.2e} (gate 1e-6)")


def c6_stable(seed, workers):
    a = abs(formula.eval_stable(1, 1, 3, (0.5, 2)).value - 1 / 6)
    P = SpectralParams(1, 1, 3, (1e-8, 1e8), (0.5, 2))
    lim = formula.eval_thm1(P).value / 1e8 ** 3
    b = abs(lim - 1 / 6)
    ok = a <= 1e-12 and b <= 1e-6
    return CriterionResult(6, "stable range", ok, a, 1e-12, f"x-limit gap {b:.2e} (gate 1e-6)")


def c7_degeneration(seed, workers):
    rng = _rng(seed, 7)
    worst = 0.0
    for _ in range(10):
        p, q = GRID[rng.integers(len(GRID))]
        N = int(rng.integers(1, 4))
        P = random_params(p, q, N, rng)
        ys = [1e-8] * p + [1e8] * q
        v = formula.eval_thm1(P.replace(ys=ys)).value * (1e8 ** N) ** q
        ref = formula.eval_compact(p, q, N, P.xs).value
        worst = max(worst, _rel(v, ref))
    return CriterionResult(7, "degeneration", worst <= 1e-6, worst, 1e-6, "10 x-sets, y -> 1e-8 / 1e8")


def c8_weyl(seed, workers):
    rng = _rng(seed, 8)
    worst = 0.0
    for p, q in GRID:
        P = random_params(p, q, 2, rng)
        for _ in range(50):
            worst = max(worst, spectra.weyl_orbit_check(P, *spectra.random_weyl_element(p, q, rng)))
    return CriterionResult(8, "Weyl invariance", worst <= 1e-10, worst, 1e-10, "50 elements per shape")


def c9_fourier(seed, workers):
    rng = _rng(seed, 9)
    worst = 0.0
    for p, q in GRID:
        for N in (1, 2, 3):
            P = random_params(p, q, N, rng, unit_circle=True)
            for k in range(P.n):
                worst = max(worst, spectra.fourier_support(P, k).leakage(0, N))
    return CriterionResult(9, "Fourier support", worst <= 1e-9, worst, 1e-9, "modes outside [0, N]")


def c10_radial(seed, workers, points=20):
    rng = _rng(seed, 10)
    worst_chi = 0.0
    worst_j = 0.0
    for p, q in GRID:
        for _ in range(points):
            pt = radial.RadialPoint.random(p, q, rng)
            for k in range(1, 5):
                worst_j = max(worst_j, radial.sqrtJ_residual(pt, k))
            for N in (1, 2, 3):
                for l in (1, 2, 3):
                    worst_chi = max(worst_chi, radial.pde_residual(pt, N, l))
    control = math.inf

    def bump(psi, phi):
        return 1e-3 * jexp(1j * psi[0])

    for _ in range(points):
        pt = radial.RadialPoint.random(1, 1, rng)
        control = min(control, max(radial.pde_residual(pt, 1, l, extra=bump) for l in (1, 2, 3)))
    ok = worst_chi < 1e-8 and worst_j < 1e-8 and control > 1e-5
    return CriterionResult(10, "radial PDE", ok, max(worst_chi, worst_j), 1e-8,
                           f"D_k sqrtJ {worst_j:.1e}; control min {control:.1e} (gate > 1e-5)")


def c11_cauchy(seed, workers):
    rng = _rng(seed, 11)
    worst = 0.0
    for n in (2, 3):
        for _ in range(10):
            ang = _separated_phases(2 * n, rng)
            psi, theta = ang[:n], ang[n:]
            prod = radial.compact_J(psi, theta)
            worst = max(worst, _rel(radial.cauchy_J(psi, theta), prod))
            worst = max(worst, _rel((-1) ** n * radial.universal_J_on_compact(psi, theta, 1), prod))
    return CriterionResult(11, "Cauchy determinant", worst <= 1e-10, worst, 1e-10, "n = 2, 3")


def c12_grassmann(seed, workers, trials=1000):
    rng = _rng(seed, 12)
    k = 4

    def rel(a, b):
        return float(np.abs(a.c - b.c).max() / max(1.0, np.abs(b.c).max()))

    forms = mult = conj = brk = 0.0
    mismatches = 0
    for _ in range(trials):
        n1, n0 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        X = grassmann.Supermatrix.random(n1, n0, k, rng)
        Y = grassmann.Supermatrix.random(n1, n0, k, rng)
        try:
            f1, f2 = grassmann._sdet_forms(X.M, X.n1)
            forms = max(forms, float(np.abs(f1 - f2).max() / max(1.0, np.abs(f1).max())))
            mult = max(mult, rel(grassmann.sdet(X @ Y), grassmann.sdet(X) * grassmann.sdet(Y)))
            G = grassmann.Supermatrix.diag(list(rng.uniform(1, 2, n1) * np.exp(1j * rng.uniform(0, 6, n1))),
                                           list(rng.uniform(1, 2, n0) * np.exp(1j * rng.uniform(0, 6, n0))), k)
            conj = max(conj, rel(grassmann.sdet(X.conjugate(G)), grassmann.sdet(X)))
        except FormMismatch:
            mismatches += 1
        Xi = grassmann.Supermatrix.random(n1, n0, k, rng, parity=int(rng.integers(2)), integer=True)
        Yi = grassmann.Supermatrix.random(n1, n0, k, rng, parity=int(rng.integers(2)), integer=True)
        brk = max(brk, float(np.abs(grassmann.supertrace(grassmann.bracket(Xi, Yi)).c).max()))
    b = grassmann.GrassmannElement.generator(0, 2)
    g = grassmann.GrassmannElement.generator(1, 2)
    S = grassmann.sdet(grassmann.Supermatrix.from_blocks([[2]], [[b]], [[g]], [[4]], 2))
    golden = float(np.abs(S.c - (2 + b * g / 4).c).max())
    worst = max(forms, mult, conj, brk)
    ok = worst <= 1e-12 and golden <= 1e-14 and mismatches == 0
    return CriterionResult(12, "Grassmann kernel", ok, worst, 1e-12,
                           f"forms {forms:.1e} mult {mult:.1e} conj {conj:.1e} bracket {brk:.0e} "
                           f"golden {golden:.0e}")


def standard_supermatrix(k=4, rng=None, nilpotent=True):
    """``diag(x | y)`` at the golden point, optionally with odd off-diagonal entries."""
    X = grassmann.Supermatrix.diag(GOLDEN.xs, GOLDEN.ys, k)
    if nilpotent and k:
        rng = np.random.default_rng(0) if rng is None else rng
        M = X.M.copy()
        odd = grassmann._degree(k) % 2 == 1
        n1 = X.n1
        for (i, j) in [(0, n1), (1, n1 + 1), (n1, 0), (n1 + 1, 1)]:
            M[i, j, odd] = 0.3 * rng.standard_normal(int(odd.sum()))
        X = grassmann.Supermatrix(M, n1, 0)
    return X


def c13_grassmann_mc(seed, workers, samples=100_000):
    rng = _rng(seed, 13)
    X = standard_supermatrix(4, rng)
    s = int(rng.integers(2**62))
    est = grassmann.grassmann_character_mc(X, 1, samples, s, workers)
    z = abs(est.body - 6 / 7) / est.body_stderr
    X0 = grassmann.Supermatrix.diag(GOLDEN.xs, GOLDEN.ys, 0)
    e0 = grassmann.grassmann_character_mc(X0, 1, samples, s, workers)
    m0 = haar_mc.mc_estimate(GOLDEN, samples, s, workers)
    bitwise = e0.body == m0.mean and e0.body_stderr == m0.stderr
    ok = z <= 4 and bitwise
    return CriterionResult(13, "Grassmann character", ok, z, 4.0,
                           f"sigma deviation; k=0 bitwise equal: {bitwise}")


CHEAP = (1, 2, 5, 6, 11)


def c14_determinism(seed, workers, samples=100_000):
    rng = _rng(seed, 14)
    s = int(rng.integers(2**62))
    P = random_params(2, 1, 3, rng)
    ests = [haar_mc.mc_estimate(P, samples, s, w) for w in (1, 2, 8)]
    X = standard_supermatrix(2, rng)
    gests = [grassmann.grassmann_character_mc(X, 2, 20_000, s, w) for w in (1, 2, 8)]
    reports = [render(run_suite([str(c) for c in CHEAP] + ["mc-small"], seed, w)) for w in (1, 2, 8)]
    same_mc = all(e == ests[0] for e in ests)
    same_g = all(np.array_equal(g.mean.c, gests[0].mean.c) and np.array_equal(g.stderr, gests[0].stderr)
                 for g in gests)
    same_r = len(set(reports)) == 1
    ok = same_mc and same_g and same_r
    return CriterionResult(14, "determinism", ok, 0.0 if ok else 1.0, 0.0,
                           f"mc {same_mc}, grassmann {same_g}, report {same_r} across 1/2/8 workers")


def mc_small(seed, workers):
    est = haar_mc.mc_estimate(GOLDEN, 20_000, seed, workers)
    z = abs(est.mean - 6 / 7) / est.stderr
    return CriterionResult(0, "mc smoke", z <= 4, z, 4.0, f"mean {est.mean.real:.12f}")


CRITERIA: Dict[str, Callable] = {
    "1": c1_golden, "2": c2_trivial, "3": c3_oracles, "4": c4_cor12, "5": c5_compact,
    "6": c6_stable, "7": c7_degeneration, "8": c8_weyl, "9": c9_fourier, "10": c10_radial,
    "11": c11_cauchy, "12": c12_grassmann, "13": c13_grassmann_mc, "14": c14_determinism,
}
EXTRA = {"mc-small": mc_small}
ALIASES = {
    "golden": "1", "trivial": "2", "oracles": "3", "cor12": "4", "compact": "5", "stable": "6",
    "degeneration": "7", "weyl": "8", "fourier": "9", "radial": "10", "cauchy": "11",
    "grassmann": "12", "grassmann-mc": "13", "determinism": "14",
}
QUICK = ["1", "2", "5", "6", "7", "8", "11"]


def suite_members(name: str) -> List[str]:
    if name == "all":
        return list(CRITERIA)
    if name == "quick":
        return list(QUICK)
    out = []
    for part in name.split(","):
        part = ALIASES.get(part.strip(), part.strip())
        if part not in CRITERIA and part not in EXTRA:
            raise KeyError(f"unknown suite {part!r}")
        out.append(part)
    return out


def run_suite(names, seed: int, workers: int = 1) -> List[CriterionResult]:
    if isinstance(names, str):
        names = suite_members(names)
    return [(CRITERIA.get(n) or EXTRA[n])(seed, workers) for n in names]


def render(results: List[CriterionResult], fmt: str = "json", seed=None) -> str:
    if fmt == "json":
        body = {"seed": seed, "passed": all(r.passed for r in results),
                "results": [asdict(r) for r in results]}
        return json.dumps(body, indent=2, sort_keys=True)
    if fmt == "csv":
        rows = ["id,name,passed,measured,tolerance,detail"]
        rows += [f'{r.id},{r.name},{r.passed},{r.measured!r},{r.tolerance!r},"{r.detail}"'
                 for r in results]
        return "\n".join(rows)
    return "\n".join(r.line() for r in results)
