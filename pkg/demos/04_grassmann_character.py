"""Superdeterminants and the character of a supermatrix.

With a diagonal body diag(x | y) the Haar average of SDet(1 - X (x) u)^-1
has numerical part equal to the coset formula.  Odd off-diagonal entries
only add nilpotent corrections.
"""
import numpy as np

from ratiokit import grassmann as g
from ratiokit.verify import GOLDEN, standard_supermatrix

b, c = g.GrassmannElement.generator(0, 2), g.GrassmannElement.generator(1, 2)
S = g.sdet(g.Supermatrix.from_blocks([[2]], [[b]], [[c]], [[4]], 2))
print("sdet([[2, b], [c, 4]]) =", S)

X = standard_supermatrix(4, np.random.default_rng(0))
est = g.grassmann_character_mc(X, 1, 50_000, seed=7)
print(f"body {est.body.real:.5f} +- {est.body_stderr:.5f}  (exact 6/7 = {6 / 7:.5f})")
top = np.argsort(-np.abs(est.mean.c))[:5]
for mask in top:
    gens = [i for i in range(4) if mask >> i & 1]
    print(f"  theta{gens}: {est.mean.c[mask]:.4f}")

print("golden params:", GOLDEN)
