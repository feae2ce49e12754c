"""The character, multiplied by the square root of the radial Jacobian,
is killed by the power-sum differential operators D_l.

Derivatives come from truncated Taylor jets, so the residuals sit at
rounding level.  Adding a small wrong term breaks this visibly.
"""
import numpy as np

from ratiokit import radial
from ratiokit.jets import exp

rng = np.random.default_rng(3)
pt = radial.RadialPoint.random(2, 1, rng)
print("point:", pt)
for l in (1, 2, 3):
    print(f"D_{l}: residual {radial.pde_residual(pt, N=2, l=l):.1e}")

bump = lambda psi, phi: 1e-3 * exp(1j * psi[0])
for l in (1, 2, 3):
    print(f"D_{l} with a 1e-3 perturbation: {radial.pde_residual(pt, 2, l, extra=bump):.1e}")
