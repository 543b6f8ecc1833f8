# SPDX-License-Identifier: Apache-2.0
"""Quadratic operator pencils: factorization, sector certificates, and
explicit semigroup solvers for u'' - 2Bu' - Cu = f on (0, 1)."""

from ._core import (
    Factorization,
    NegativeRealEigenvalueError,
    QpencilError,
    SchemaValidationError,
    ShapeMismatchError,
    ConstraintViolatedError,
    SingularSystemError,
    __version__,
    accretivity_margin,
    check_c1,
    contraction_check,
    direct_solve_bvp,
    estimate_c2,
    expm,
    factorize,
    fractional_power,
    gauss_legendre,
    hermitian_split,
    numerical_range,
    ordered_residual,
    principal_sqrt,
    quasi_sectorial_check,
    sector_test,
    solve_bvp,
    symmetrized_residual,
    transport_adjudication,
    transport_claims,
    transport_solve,
)

__all__ = [
    "Factorization",
    "NegativeRealEigenvalueError",
    "QpencilError",
    "SchemaValidationError",
    "ShapeMismatchError",
    "ConstraintViolatedError",
    "SingularSystemError",
    "__version__",
    "accretivity_margin",
    "check_c1",
    "contraction_check",
    "direct_solve_bvp",
    "estimate_c2",
    "expm",
    "factorize",
    "fractional_power",
    "gauss_legendre",
    "hermitian_split",
    "numerical_range",
    "ordered_residual",
    "principal_sqrt",
    "quasi_sectorial_check",
    "sector_test",
    "solve_bvp",
    "symmetrized_residual",
    "transport_adjudication",
    "transport_claims",
    "transport_solve",
]
