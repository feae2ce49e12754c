"""The smallest interesting case: one ratio in u, one in conj(u), N = 1.

Coset sum, torus series and Monte Carlo all land on 6/7.
"""
from fractions import Fraction

from ratiokit import SpectralParams, eval_thm1, mc_estimate, torus_average
from ratiokit.formula import thm1_term

P = SpectralParams(1, 1, 1, xs=(2, 3), ys=(0.5, 4))

# Two cosets: the identity and the swap of x1, x2.
ident = thm1_term(P.xs, P.ys, 1, 1, (0,), (1,))
swap = thm1_term(P.xs, P.ys, 1, 1, (1,), (0,))
print("identity coset:", Fraction(ident.real).limit_denominator(100))
print("swap coset:    ", Fraction(swap.real).limit_denominator(100))

r = eval_thm1(P, keep_terms=True)
print(f"coset sum  {r.value.real:.15f}  (condition {r.condition:.2f})")

s = torus_average(P)
print(f"series     {s.value.real:.15f}  (order {s.order}, tail bound {s.bound:.1e})")

est = mc_estimate(P, 100_000, seed=24397)
z = abs(est.mean - 6 / 7) / est.stderr
print(f"Haar MC    {est.mean.real:.6f} +- {est.stderr:.6f}  ({z:.2f} sigma from 6/7)")
