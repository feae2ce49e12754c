"""Two structural facts visible numerically.

The average is a polynomial of degree N in each x, so on the unit circle
only Fourier modes 0..N show up.  It is also unchanged when the x's are
permuted or the y's are permuted within their block.
"""
import numpy as np

from ratiokit import SpectralParams
from ratiokit import spectra

rng = np.random.default_rng(1)
P = SpectralParams(2, 1, 3, np.exp(1j * np.array([0.4, 2.2, 4.4])), (0.3j, -0.45, 2.5))

prof = spectra.fourier_support(P, 1)
for m, c in zip(prof.modes, prof.coefficients):
    print(f"mode {m:+3d}  |c| = {abs(c):.2e}")
print("leakage outside [0, N]:", prof.leakage(0, P.N))

worst = max(spectra.weyl_orbit_check(P, *spectra.random_weyl_element(2, 1, rng)) for _ in range(20))
print("largest relative change over 20 Weyl elements:", worst)
