"""Finite-volume Bloch/Neumann eigenvalue oracle on the unit cell."""
from .bands import (
    BandData,
    Gap,
    NeumannData,
    band_sweep,
    default_alpha_grid,
    interior_samples,
    neumann_spectrum,
    solve_point,
    zone_path,
)
from .field import CoefficientField, voxelize
from .limits import DiscreteLimits, discrete_limits
from .operator import BlochProblem, BoundaryCondition, DiscreteOperator, assemble_operator
from .solve import EigenResult, EigenSolveError, eigen_solve
from .verify import (
    CheckResult,
    ReciprocalReport,
    VerificationReport,
    reciprocal_check,
    verify_certificate,
)

__all__ = [
    "BandData",
    "BlochProblem",
    "BoundaryCondition",
    "CheckResult",
    "CoefficientField",
    "DiscreteLimits",
    "DiscreteOperator",
    "EigenResult",
    "EigenSolveError",
    "Gap",
    "NeumannData",
    "ReciprocalReport",
    "VerificationReport",
    "assemble_operator",
    "band_sweep",
    "default_alpha_grid",
    "discrete_limits",
    "eigen_solve",
    "interior_samples",
    "neumann_spectrum",
    "reciprocal_check",
    "solve_point",
    "verify_certificate",
    "voxelize",
    "zone_path",
]
