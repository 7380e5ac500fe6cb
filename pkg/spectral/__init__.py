# zaremba-spectra - Spectral Module
# Copyright (C) 2025 Nicholas Acord <ncacord@protonmail.com>

"""
zaremba-spectra spectral module - the numerics.

- bessel: Bessel functions of the first kind of real order
- coefficients: Operator coefficients, factorisation, phase decomposition
- ellipticity: Ray audits and perturbation budgets
- disk_spectrum: Unit-disk eigenpairs, inner products and expansions
- family: The finite-dimensional family L(lambda) and its root vectors
"""

__version__ = "0.3.0"
__author__ = "Nicholas Acord"

from .bessel import bessel_j, bessel_j_prime, bessel_pair
from .coefficients import (
    EllipticCoefficients,
    PhaseDecomposition,
    boundary_stress_coeffs,
    hermitian_sqrt,
    polar_decompose,
)
from .disk_spectrum import (
    DiskModel,
    RadialEigenpair,
    expand_function,
    find_eigenvalues,
    spectrum_table,
)
from .ellipticity import Budget, Ray, check_ray, invertibility_budget, optimal_ray
from .family import (
    FamilyMatrices,
    assemble_disk_family,
    characteristic_values,
    root_chains,
    solve,
)

__all__ = [
    "bessel_j",
    "bessel_j_prime",
    "bessel_pair",
    "EllipticCoefficients",
    "PhaseDecomposition",
    "boundary_stress_coeffs",
    "hermitian_sqrt",
    "polar_decompose",
    "DiskModel",
    "RadialEigenpair",
    "expand_function",
    "find_eigenvalues",
    "spectrum_table",
    "Budget",
    "Ray",
    "check_ray",
    "invertibility_budget",
    "optimal_ray",
    "FamilyMatrices",
    "assemble_disk_family",
    "characteristic_values",
    "root_chains",
    "solve",
]
