"""Exact first integrals and integrability checks for the Lotka-Volterra systems LV(n, k)."""

from .exactalg import LaurentPolynomial
from .integrals import H_list, K_poly, enumerate_S, integral_family
from .poisson import SystemSpec, bracket, build_A, casimir

__version__ = "0.1.0"

__all__ = [
    "LaurentPolynomial",
    "SystemSpec",
    "build_A",
    "bracket",
    "casimir",
    "enumerate_S",
    "K_poly",
    "H_list",
    "integral_family",
]
