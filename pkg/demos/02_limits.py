"""Degenerations of the general formula.

Sending the y's to 0 and infinity leaves the compact average; sending the
x's to 0 and infinity leaves the stable-range value.  Each needs the
matching power of the diverging parameter divided out.
"""
from ratiokit import SpectralParams, eval_compact, eval_stable, eval_thm1

xs = (0.3, 0.7)
print("compact, xs=(0.3, 0.7), N=2:", eval_compact(1, 1, 2, xs).value.real)
for big in (1e2, 1e4, 1e8):
    P = SpectralParams(1, 1, 2, xs, (1 / big, big))
    print(f"  y -> (1/{big:g}, {big:g}):", (eval_thm1(P).value * big ** 2).real)

print("stable, ys=(0.5, 2), N=3:", eval_stable(1, 1, 3, (0.5, 2)).value.real)
for big in (1e2, 1e4, 1e8):
    P = SpectralParams(1, 1, 3, (1 / big, big), (0.5, 2))
    print(f"  x -> (1/{big:g}, {big:g}):", (eval_thm1(P).value / big ** 3).real)

# Coinciding x's: the individual coset terms blow up, the sum does not.
r = eval_compact(1, 1, 2, (0.3, 0.3))
print("confluent compact (0.3, 0.3):", r.value.real, r.method, r.diagnostics)
