"""Exact arithmetic: Gaussian rationals and homogeneous trivariate polynomials."""

from .gaussian import I, GaussianRational, as_gaussian
from .gcd import poly_gcd, poly_gcd_many
from .tripoly import T, TriPoly, W, Z, divides, poly_divexact, poly_eval, poly_mul, poly_sum
from .upoly import UPoly, upoly_gcd

__all__ = [
    "GaussianRational", "I", "as_gaussian", "TriPoly", "Z", "W", "T",
    "poly_mul", "poly_eval", "poly_gcd", "poly_gcd_many", "poly_divexact", "poly_sum", "divides",
    "UPoly", "upoly_gcd",
]
