"""Geometric bounds on the resonance spectrum and convergence radii.

For a P_theta geometry the resonances are bounded below by
``mu* = min(1/2, theta/2) - 1/2``.  That bound places the nearest pole of the
solution operator at ``z* = (mu* + 1/2)/(mu* - 1/2)`` and caps every power
series in ``z = 1/k`` by the radius

    r* = Lambda d_hat |z*| / ((1/2 - mu*)^-1 + Lambda d_hat)

where ``Lambda`` is the lowest nonzero eigenvalue of the relevant cell
Laplacian and ``d_hat`` is the isolation of the tracked limit eigenvalue.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

LAMBDA_NEUMANN = math.pi**2
LAMBDA_PERIODIC = 4.0 * math.pi**2


def lambda_passband(dimension: int) -> float:
    """``d pi^2``: the largest ``|alpha|^2`` reached by the passband sweep."""
    return dimension * math.pi**2


class InvalidGeometry(ValueError):
    pass


class Variant(str, enum.Enum):
    CANONICAL = "canonical"
    PAPER_LITERAL = "paper_literal"


class LiteralRadius(str, enum.Enum):
    THM1_GAP = "thm1_gap"
    THM1_PASS = "thm1_pass"
    ALPHA_NONZERO = "alpha_nonzero"
    ALPHA_ZERO = "alpha_zero"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class ResonanceBounds:
    theta: float
    rho: float
    mu_star: float
    z_star: float


@dataclass(frozen=True)
class RadiusParams:
    spectral_floor: float
    d_hat: float
    r_star: float


def theta_disks(a: float, b: float) -> float:
    """P_theta constant of a disk of radius ``a`` buffered to radius ``b``."""
    if not (0.0 < a < b):
        raise InvalidGeometry(f"need 0 < a < b, got a={a}, b={b}")
    return (b * b - a * a) / (b * b + a * a)


def buffered_theta(poincare_constants: Sequence[float], dn_norms: Sequence[float]) -> float:
    """Largest admissible theta from per-inclusion ``C_R`` and ``||DN||`` values.

    Both sequences are user data; nothing here estimates them from shape.
    """
    if len(poincare_constants) != len(dn_norms) or not dn_norms:
        raise ValueError("need one Poincare constant and one DN norm per inclusion")
    worst = max((1.0 + c) * n for c, n in zip(poincare_constants, dn_norms))
    if not worst > 0:
        raise ValueError("constants must give a positive bound")
    return 1.0 / worst


def resonance_bounds(theta: float) -> ResonanceBounds:
    if not theta > 0:
        raise ValueError(f"theta must be positive, got {theta}")
    rho = min(0.5, 0.5 * theta)
    mu = rho - 0.5
    z = (mu + 0.5) / (mu - 0.5)
    return ResonanceBounds(theta, rho, mu, z)


def disk_bounds_closed_form(a: float, b: float) -> tuple[float, float]:
    """``(mu*, z*)`` for a buffered disk, written directly in ``a`` and ``b``."""
    if not (0.0 < a < b):
        raise InvalidGeometry(f"need 0 < a < b, got a={a}, b={b}")
    a2, b2 = a * a, b * b
    return -a2 / (a2 + b2), -(b2 - a2) / (b2 + 3.0 * a2)


def convergence_radius(spectral_floor: float, d_hat: float, bounds: ResonanceBounds) -> RadiusParams:
    if not spectral_floor > 0:
        raise ValueError(f"spectral floor must be positive, got {spectral_floor}")
    if not d_hat > 0:
        raise ValueError(f"d_hat must be positive, got {d_hat}")
    ld = spectral_floor * d_hat
    r = ld * abs(bounds.z_star) / (1.0 / (0.5 - bounds.mu_star) + ld)
    return RadiusParams(spectral_floor, d_hat, r)


def paper_literal_disk_radius(
    variant: LiteralRadius | str, a: float, b: float, d_j: float, alpha_sq: float | None = None
) -> float:
    """Disk radii in their printed forms, kept for reproduction.

    The five forms do not agree with each other or with
    :func:`convergence_radius` up to constant factors.
    """
    variant = LiteralRadius(variant)
    if not (0.0 < a < b):
        raise InvalidGeometry(f"need 0 < a < b, got a={a}, b={b}")
    if not d_j > 0:
        raise ValueError(f"d_j must be positive, got {d_j}")
    a2, b2 = a * a, b * b
    diff, total, outer = b2 - a2, b2 + a2, b2 + 3.0 * a2
    pi2 = math.pi**2
    if variant is LiteralRadius.THM1_GAP:
        return pi2 * d_j * diff / (total + pi2 * d_j * outer)
    if variant is LiteralRadius.THM1_PASS:
        return 2.0 * pi2 * d_j * diff / (total + 2.0 * pi2 * d_j * outer)
    if variant is LiteralRadius.ALPHA_NONZERO:
        if alpha_sq is None or not alpha_sq > 0:
            raise ValueError("alpha_nonzero needs |alpha|^2 > 0")
        ld = alpha_sq * 2.0 * d_j
        return ld * diff / (4.0 * total + ld * outer)
    if variant is LiteralRadius.ALPHA_ZERO:
        ld = pi2 * 2.0 * d_j
        return ld * diff / (total + ld * outer)
    ld = pi2 * 2.0 * d_j
    return ld * diff / (4.0 * total + ld * outer)
