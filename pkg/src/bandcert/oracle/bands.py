"""Band sweeps over the Brillouin zone and numerical gap detection."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..geometry import DiskCrystal
from .field import MIN_RESOLUTION, CoefficientField
from .operator import BlochProblem, BoundaryCondition, assemble_operator
from .solve import eigen_solve

RICHARDSON_FACTOR = 3.0
PI = math.pi


def zone_path(dimension: int = 2) -> list[tuple[float, ...]]:
    """Irreducible-zone boundary samples for the square/cubic lattice."""
    if dimension == 2:
        gamma, x, m = (0.0, 0.0), (PI, 0.0), (PI, PI)
        legs = [(gamma, x, 5), (x, m, 5), (m, gamma, 6)]
    elif dimension == 3:
        gamma, x, m, r = (0.0,) * 3, (PI, 0.0, 0.0), (PI, PI, 0.0), (PI, PI, PI)
        legs = [(gamma, x, 4), (x, m, 4), (m, r, 4), (r, gamma, 4)]
    else:
        raise ValueError(f"dimension must be 2 or 3, got {dimension}")
    points = [legs[0][0]]
    for start, end, steps in legs:
        for s in range(1, steps + 1):
            t = s / steps
            points.append(tuple(a + t * (b - a) for a, b in zip(start, end)))
    # the closed loop returns to Gamma; keep it once
    return points[:-1]


def interior_samples(dimension: int = 2) -> list[tuple[float, ...]]:
    # ticks avoid the diagonal points of the zone path, so no sample repeats
    if dimension == 2:
        ticks = (PI / 4, 5 * PI / 8, 7 * PI / 8)
        return [(a, b) for a in ticks for b in ticks]
    ticks = (PI / 3, 2 * PI / 3)
    return [(a, b, c) for a in ticks for b in ticks for c in ticks]


def default_alpha_grid(dimension: int = 2) -> list[tuple[float, ...]]:
    return zone_path(dimension) + interior_samples(dimension)


@dataclass(frozen=True)
class Gap:
    band: int
    lower: float
    upper: float
    margin: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def reported(self) -> bool:
        return self.width > self.margin


@dataclass(frozen=True)
class BandData:
    alphas: tuple[tuple[float, ...], ...]
    eigenvalues: np.ndarray = field(repr=False)
    k: float
    n: int
    dual: bool
    margins: np.ndarray
    coarse: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def m(self) -> int:
        return self.eigenvalues.shape[0]

    def bands(self) -> list[tuple[float, float]]:
        return [(float(row.min()), float(row.max())) for row in self.eigenvalues]

    def gaps(self) -> list[Gap]:
        out = []
        b = self.bands()
        for j in range(len(b) - 1):
            lo, hi = b[j][1], b[j + 1][0]
            if hi > lo:
                margin = float(max(self.margins[j], self.margins[j + 1]))
                out.append(Gap(j + 1, lo, hi, margin))
        return out

    def reported_gaps(self) -> list[Gap]:
        return [g for g in self.gaps() if g.reported]

    def primal_frame(self) -> np.ndarray:
        """Eigenvalues in the frame of the primal crystal."""
        return self.eigenvalues * self.k if self.dual else self.eigenvalues


def solve_point(
    geom: DiskCrystal | None,
    k: float,
    n: int,
    alpha: Sequence[float],
    m: int,
    boundary: BoundaryCondition | str = BoundaryCondition.QUASI_PERIODIC,
    dual: bool = False,
    dimension: int = 2,
) -> np.ndarray:
    """Lowest ``m`` eigenvalues of one cell problem; ``geom=None`` is homogeneous."""
    if geom is None:
        fld = CoefficientField.homogeneous(n, dimension)
    else:
        fld = CoefficientField.from_geometry(geom, n, k, dual)
    problem = BlochProblem(fld, tuple(alpha), boundary, m)
    return eigen_solve(assemble_operator(problem), m).values


def _sweep(geom, k, n, alphas, m, dual, workers) -> np.ndarray:
    def task(alpha):
        return solve_point(geom, k, n, alpha, m, dual=dual,
                           dimension=len(alpha))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(task, alphas))
    else:
        columns = [task(a) for a in alphas]
    return np.column_stack(columns)


def richardson_margins(fine: np.ndarray, coarse: np.ndarray) -> np.ndarray:
    """Three times the first-order two-grid error estimate, per band."""
    return RICHARDSON_FACTOR * np.abs(fine - coarse).max(axis=1)


def band_sweep(
    geom: DiskCrystal | None,
    k: float,
    alpha_grid: Sequence[Sequence[float]] | None = None,
    m: int = 8,
    n: int = 64,
    dual: bool = False,
    richardson: bool = True,
    workers: int = 1,
) -> BandData:
    """Bloch eigenvalues on an alpha grid, with a two-grid error margin.

    The coarse grid has ``n // 2`` cells per axis.  Columns of the table
    follow ``alpha_grid`` regardless of the order in which solves finish.
    """
    dimension = geom.dimension if geom is not None else (len(alpha_grid[0]) if alpha_grid else 2)
    alphas = tuple(tuple(float(x) for x in a) for a in (alpha_grid or default_alpha_grid(dimension)))
    fine = _sweep(geom, k, n, alphas, m, dual, workers)
    coarse = None
    margins = np.zeros(m)
    if richardson and n // 2 >= MIN_RESOLUTION:
        coarse = _sweep(geom, k, n // 2, alphas, m, dual, workers)
        margins = richardson_margins(fine, coarse)
    return BandData(alphas, fine, float(k), n, dual, margins, coarse)


@dataclass(frozen=True)
class NeumannData:
    values: np.ndarray
    k: float
    n: int
    dual: bool
    margins: np.ndarray
    boundary: BoundaryCondition = BoundaryCondition.NEUMANN_ZERO_MEAN

    def primal_frame(self) -> np.ndarray:
        return self.values * self.k if self.dual else self.values


def neumann_spectrum(
    geom: DiskCrystal | None,
    k: float,
    m: int = 8,
    n: int = 64,
    dual: bool = False,
    richardson: bool = True,
    boundary: BoundaryCondition | str = BoundaryCondition.NEUMANN_ZERO_MEAN,
    dimension: int = 2,
) -> NeumannData:
    """Zero-mean Neumann (or periodic) eigenvalues with a two-grid margin."""
    boundary = BoundaryCondition(boundary)
    if geom is not None:
        dimension = geom.dimension
    zero = (0.0,) * dimension
    fine = solve_point(geom, k, n, zero, m, boundary, dual, dimension)
    margins = np.zeros(m)
    if richardson and n // 2 >= MIN_RESOLUTION:
        coarse = solve_point(geom, k, n // 2, zero, m, boundary, dual, dimension)
        margins = RICHARDSON_FACTOR * np.abs(fine - coarse)
    return NeumannData(fine, float(k), n, dual, margins, boundary)
