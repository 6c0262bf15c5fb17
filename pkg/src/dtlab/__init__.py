"""Numerical toolkit for the quasinilpotent DT-operator.

Modules
-------
wbranch    principal Lambert W, rho(z) = -W0(-z) and its boundary values
speclaw    the spectral law of T*T (density, distribution function, recursion)
snpoly     exact Sniady polynomials, their moments and generating functions
jointlaw   the joint law of (D0, S_k), its kernel, limits and distance
rmtsim     Monte Carlo simulation of the upper triangular Gaussian model
cli        the ``dtlab`` command
"""

from .errors import CapExceeded, ConvergenceError, DegenerateNodes, DomainError, DtlabError, LinearAlgebraError

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ConvergenceError",
    "DegenerateNodes",
    "DomainError",
    "DtlabError",
    "LinearAlgebraError",
]
