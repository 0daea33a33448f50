"""Crystal geometries: buffered disks/spheres and general P_theta inclusions."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from .limit_spectra import LimitSpectra


class GeometryError(ValueError):
    """A geometry violates one of its invariants."""


def ball_volume(radius: float, dimension: int) -> float:
    if dimension == 2:
        return math.pi * radius**2
    if dimension == 3:
        return 4.0 / 3.0 * math.pi * radius**3
    raise GeometryError(f"dimension must be 2 or 3, got {dimension}")


@dataclass(frozen=True)
class DiskCrystal:
    """``n_disks`` inclusions of radius ``radius`` in the unit cell, each inside
    a disjoint buffer ball of radius ``buffer``.

    Centers are optional metadata; the oracle needs them when ``n_disks > 1``.
    """

    n_disks: int
    radius: float
    buffer: float
    dimension: int = 2
    centers: Optional[tuple[tuple[float, ...], ...]] = None

    def __post_init__(self) -> None:
        if self.n_disks < 1:
            raise GeometryError(f"n_disks must be positive, got {self.n_disks}")
        if self.dimension not in (2, 3):
            raise GeometryError(f"dimension must be 2 or 3, got {self.dimension}")
        if not self.radius > 0:
            raise GeometryError(f"radius must be positive, got {self.radius}")
        if not self.radius < self.buffer:
            raise GeometryError(
                f"need 0 < a < b (radius < buffer), got a={self.radius}, b={self.buffer}"
            )
        packed = self.n_disks * ball_volume(self.buffer, self.dimension)
        if packed > 1.0:
            raise GeometryError(
                f"N * |B_b| = {packed:.6g} exceeds the unit cell volume; "
                "buffered inclusions cannot be disjoint"
            )
        if self.centers is not None:
            centers = tuple(tuple(float(c) for c in p) for p in self.centers)
            object.__setattr__(self, "centers", centers)
            self._check_centers(centers)

    def _check_centers(self, centers) -> None:
        if len(centers) != self.n_disks:
            raise GeometryError(
                f"{len(centers)} centers given for n_disks={self.n_disks}"
            )
        b = self.buffer
        for p in centers:
            if len(p) != self.dimension:
                raise GeometryError(f"center {p} does not have dimension {self.dimension}")
            if any(c - b < 0.0 or c + b > 1.0 for c in p):
                raise GeometryError(f"buffer ball at {p} leaves the unit cell")
        for p, q in itertools.combinations(centers, 2):
            if math.dist(p, q) < 2.0 * b:
                raise GeometryError(
                    f"centers {p} and {q} are closer than 2b = {2.0 * b}"
                )

    @property
    def theta(self) -> float:
        from .resonance import theta_disks

        return theta_disks(self.radius, self.buffer)

    def inclusion_volume(self) -> float:
        return self.n_disks * ball_volume(self.radius, self.dimension)

    def resolved_centers(self) -> tuple[tuple[float, ...], ...]:
        if self.centers is not None:
            return self.centers
        if self.n_disks == 1:
            return ((0.5,) * self.dimension,)
        raise GeometryError("centers are required to voxelize more than one inclusion")


@dataclass(frozen=True)
class GeneralCrystal:
    """A P_theta geometry described only by theta and user-supplied limit spectra."""

    theta: float
    dimension: int
    spectra: "LimitSpectra" = field(repr=False)

    def __post_init__(self) -> None:
        if not self.theta > 0:
            raise GeometryError(f"theta must be positive, got {self.theta}")
        if self.dimension not in (2, 3):
            raise GeometryError(f"dimension must be 2 or 3, got {self.dimension}")
