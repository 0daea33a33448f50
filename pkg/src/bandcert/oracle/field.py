"""Piecewise-constant coefficient fields sampled at cell centres."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry import DiskCrystal

MIN_RESOLUTION = 8


def voxelize(geom: DiskCrystal, n: int) -> np.ndarray:
    """Boolean mask of the cells whose centre lies inside an inclusion."""
    if n < MIN_RESOLUTION:
        raise ValueError(f"grid resolution must be at least {MIN_RESOLUTION}, got {n}")
    d = geom.dimension
    centres = (np.arange(n) + 0.5) / n
    grids = np.meshgrid(*([centres] * d), indexing="ij")
    mask = np.zeros((n,) * d, dtype=bool)
    for c in geom.resolved_centers():
        dist2 = np.zeros((n,) * d)
        for g, ci in zip(grids, c):
            # minimum-image distance on the unit torus
            delta = np.abs(g - ci)
            delta = np.minimum(delta, 1.0 - delta)
            dist2 += delta * delta
        mask |= dist2 < geom.radius**2
    return mask


@dataclass(frozen=True)
class CoefficientField:
    """``1`` on inclusions and ``k`` outside; the dual swaps to ``1/k`` and ``1``."""

    inclusion: np.ndarray = field(repr=False)
    contrast: float
    dual: bool = False

    def __post_init__(self) -> None:
        mask = np.asarray(self.inclusion, dtype=bool)
        if mask.ndim not in (2, 3) or len(set(mask.shape)) != 1:
            raise ValueError(f"inclusion mask must be a 2-d or 3-d cube, got shape {mask.shape}")
        if mask.shape[0] < MIN_RESOLUTION:
            raise ValueError(
                f"grid resolution must be at least {MIN_RESOLUTION}, got {mask.shape[0]}"
            )
        if not self.contrast > 0:
            raise ValueError(f"contrast must be positive, got {self.contrast}")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "inclusion", mask)

    @classmethod
    def from_geometry(cls, geom: DiskCrystal, n: int, k: float, dual: bool = False):
        return cls(voxelize(geom, n), float(k), dual)

    @classmethod
    def homogeneous(cls, n: int, dimension: int = 2) -> "CoefficientField":
        return cls(np.zeros((n,) * dimension, dtype=bool), 1.0)

    @property
    def n(self) -> int:
        return self.inclusion.shape[0]

    @property
    def dimension(self) -> int:
        return self.inclusion.ndim

    @property
    def inside_value(self) -> float:
        return 1.0 / self.contrast if self.dual else 1.0

    @property
    def outside_value(self) -> float:
        return 1.0 if self.dual else self.contrast

    def values(self) -> np.ndarray:
        return np.where(self.inclusion, self.inside_value, self.outside_value)

    def inclusion_fraction(self) -> float:
        return float(self.inclusion.mean())
