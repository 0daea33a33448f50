"""Finite-volume discretisation of ``-div(a grad u)`` on the unit cell.

Cells of width ``h = 1/n`` carry one unknown each.  The flux through a face
uses the harmonic mean ``2 a1 a2 / (a1 + a2)`` of the two adjacent cell
values.  Faces on the cell boundary wrap around with a Bloch phase
``exp(i alpha_axis)`` (quasi-periodic, periodic when ``alpha = 0``) or are
dropped (Neumann).  The mass matrix is the identity, so the matrix below is
the whole eigenproblem.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .field import CoefficientField


class BoundaryCondition(str, enum.Enum):
    QUASI_PERIODIC = "quasi_periodic"
    PERIODIC_ZERO_MEAN = "periodic_zero_mean"
    NEUMANN_ZERO_MEAN = "neumann_zero_mean"


@dataclass(frozen=True)
class BlochProblem:
    field: CoefficientField
    alpha: tuple[float, ...] = (0.0, 0.0)
    boundary: BoundaryCondition = BoundaryCondition.QUASI_PERIODIC
    m: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "boundary", BoundaryCondition(self.boundary))
        alpha = tuple(float(x) for x in self.alpha)
        if self.boundary is not BoundaryCondition.QUASI_PERIODIC:
            alpha = (0.0,) * self.field.dimension
        if len(alpha) != self.field.dimension:
            raise ValueError(
                f"alpha has {len(alpha)} components for a {self.field.dimension}-d cell"
            )
        if any(not (-math.pi < x <= math.pi) for x in alpha):
            raise ValueError(f"alpha={alpha} is outside (-pi, pi]^d")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def zero_mean(self) -> bool:
        return self.boundary is not BoundaryCondition.QUASI_PERIODIC


@dataclass(frozen=True)
class DiscreteOperator:
    matrix: sp.csr_matrix = field(repr=False)
    n: int
    dimension: int
    deflate_constant: bool
    problem: Optional[BlochProblem] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def face_weights(values: np.ndarray, axis: int) -> np.ndarray:
    """Harmonic means across the ``+axis`` face of every cell (wrapping)."""
    nb = np.roll(values, -1, axis=axis)
    return 2.0 * values * nb / (values + nb)


def assemble_from_weights(
    weights: list[np.ndarray], alpha: tuple[float, ...] | None
) -> sp.csr_matrix:
    """Scaled stiffness matrix from per-axis ``+face`` weights.

    ``alpha=None`` drops the faces on the cell boundary (Neumann).
    """
    shape = weights[0].shape
    n, d = shape[0], len(shape)
    size = int(np.prod(shape))
    idx = np.arange(size).reshape(shape)
    complex_phase = alpha is not None and any(a != 0.0 for a in alpha)
    dtype = np.complex128 if complex_phase else np.float64
    rows, cols, vals = [], [], []
    diag = np.zeros(size)
    for ax, w in enumerate(weights):
        nb = np.roll(idx, -1, axis=ax)
        on_boundary = np.zeros(shape, dtype=bool)
        sl = [slice(None)] * d
        sl[ax] = n - 1
        on_boundary[tuple(sl)] = True
        keep = ~on_boundary if alpha is None else np.ones(shape, dtype=bool)
        keep &= w != 0.0
        i = idx[keep]
        j = nb[keep]
        wk = w[keep]
        phase = np.ones(wk.shape, dtype=dtype)
        if complex_phase and alpha[ax] != 0.0:
            phase[on_boundary[keep]] = np.exp(1j * alpha[ax])
        rows += [i, j]
        cols += [j, i]
        vals += [-wk * phase, -wk * np.conj(phase)]
        np.add.at(diag, i, wk)
        np.add.at(diag, j, wk)
    all_idx = idx.ravel()
    rows.append(all_idx)
    cols.append(all_idx)
    vals.append(diag.astype(dtype))
    mat = sp.coo_matrix(
        (np.concatenate(vals) * float(n * n), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsr()
    mat.sum_duplicates()
    return mat


def stiffness(values: np.ndarray, alpha: tuple[float, ...] | None) -> sp.csr_matrix:
    """Scaled stiffness matrix of a cell-centred coefficient array."""
    return assemble_from_weights([face_weights(values, ax) for ax in range(values.ndim)], alpha)


def assemble_operator(problem: BlochProblem) -> DiscreteOperator:
    fld = problem.field
    values = fld.values()
    if problem.boundary is BoundaryCondition.NEUMANN_ZERO_MEAN:
        mat = stiffness(values, None)
    else:
        mat = stiffness(values, problem.alpha)
    return DiscreteOperator(mat, fld.n, fld.dimension, problem.zero_mean, problem)
