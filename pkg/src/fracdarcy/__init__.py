"""Stabilized mixed finite elements for Darcy flow driven by nonlocal
operators of fractional order."""

from .special import (
    ExactSolution,
    FracParams,
    exact_energy,
    exact_pressure,
    exact_rhs,
    frac_constants,
    gamma,
    jacobi_poly,
    reference_solution,
)

__all__ = [
    "ExactSolution",
    "FracParams",
    "exact_energy",
    "exact_pressure",
    "exact_rhs",
    "frac_constants",
    "gamma",
    "jacobi_poly",
    "reference_solution",
]

__version__ = "0.1.0"
