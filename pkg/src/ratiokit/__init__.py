"""Haar averages of ratios of characteristic polynomials of random unitary matrices.

The exact coset-sum formula lives in :mod:`ratiokit.formula`; the other
modules are independent oracles (Monte Carlo, torus series, Grassmann
integrals, radial differential equations, Fourier support) used to check it.
"""
from .errors import *  # noqa: F401,F403
from .formula import (EvalResult, eval_compact, eval_confluent, eval_cor12, eval_stable,
                      eval_thm1)
from .haar_mc import Estimate, UnitarySample, eval_Z, mc_estimate, sample_haar_unitary
from .params import (CosetTable, ExtendedParams, SpectralParams, Weight, enumerate_cosets,
                     highest_weight_multiplier, validate, validate_extended)
from .series_oracle import TruncationPolicy, residue_average_n1, torus_average

__version__ = "0.1.0"

__all__ = [
    "CosetTable", "Estimate", "EvalResult", "ExtendedParams", "SpectralParams",
    "TruncationPolicy", "UnitarySample", "Weight", "enumerate_cosets", "eval_Z",
    "eval_compact", "eval_confluent", "eval_cor12", "eval_stable", "eval_thm1",
    "highest_weight_multiplier", "mc_estimate", "residue_average_n1",
    "sample_haar_unitary", "torus_average", "validate", "validate_extended",
]
