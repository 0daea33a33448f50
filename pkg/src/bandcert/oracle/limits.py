"""The ``k -> infinity`` limits of the discrete operators on a fixed grid.

As ``k`` grows the harmonic face weight between an inclusion cell and an
exterior cell tends to 2, and the exterior field is forced to a constant.
Two limit problems follow:

* Dirichlet: inclusion cells only, exterior value 0 (the quasi-periodic
  limit for ``alpha != 0``);
* lumped Neumann: inclusion cells plus one exterior unknown of mass
  ``n_ext`` (the zero-mean Neumann and periodic limit).

For every finite ``k`` the Bloch eigenvalues sit below the discrete
Dirichlet ones by min-max.  Comparing both limits with the closed-form
limit spectra measures the geometric error of the voxelised disks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .operator import assemble_from_weights
from .solve import EigenSolveError, backward_errors, deflate_constant, lowest_eigenpairs

LIMIT_WEIGHT = 2.0


def limit_face_weights(mask: np.ndarray, axis: int) -> np.ndarray:
    nb = np.roll(mask, -1, axis=axis)
    w = np.zeros(mask.shape)
    w[mask & nb] = 1.0
    w[mask ^ nb] = LIMIT_WEIGHT
    return w


@dataclass(frozen=True)
class DiscreteLimits:
    n: int
    dirichlet: np.ndarray
    neumann: np.ndarray


def _limit_blocks(mask: np.ndarray):
    weights = [limit_face_weights(mask, ax) for ax in range(mask.ndim)]
    full = assemble_from_weights(weights, None).tocsr()
    inside = np.flatnonzero(mask.ravel())
    a_ii = full[inside][:, inside]
    n = mask.shape[0]
    # each inclusion row couples to the exterior through its weight-2 faces
    to_ext = a_ii.diagonal() - _offdiag_sum(a_ii)
    return a_ii, to_ext, n


def _offdiag_sum(a: sp.csr_matrix) -> np.ndarray:
    """Sum of ``|a_ij|`` over ``j != i`` per row."""
    return np.asarray(abs(a).sum(axis=1)).ravel() - np.abs(a.diagonal())


def discrete_dirichlet_limit(mask: np.ndarray, m: int) -> np.ndarray:
    a_ii, _, _ = _limit_blocks(mask)
    vals, vecs, _ = lowest_eigenpairs(a_ii, m, shift=-4.0)
    _check(a_ii, vals, vecs)
    return vals


def lumped_neumann_operator(mask: np.ndarray) -> tuple[sp.csr_matrix, np.ndarray]:
    """Symmetrically scaled limit operator and its mass diagonal."""
    a_ii, to_ext, n = _limit_blocks(mask)
    n_ext = float(mask.size - mask.sum())
    col = sp.csr_matrix(-to_ext.reshape(-1, 1))
    corner = sp.csr_matrix([[float(to_ext.sum())]])
    a = sp.bmat([[a_ii, col], [col.T, corner]]).tocsr()
    mass = np.ones(a.shape[0])
    mass[-1] = n_ext
    scale = sp.diags(1.0 / np.sqrt(mass))
    return (scale @ a @ scale).tocsr(), mass


def discrete_neumann_limit(mask: np.ndarray, m: int) -> np.ndarray:
    s, mass = lumped_neumann_operator(mask)
    vals, vecs, _ = lowest_eigenpairs(s, m + 1, shift=-4.0)
    vals, vecs = deflate_constant(vals, vecs, weights=np.sqrt(mass))
    _check(s, vals, vecs)
    return vals


def _check(mat, vals, vecs) -> None:
    res = backward_errors(mat, vals, vecs)
    if np.any(res > 1e-8):
        raise EigenSolveError(f"limit problem residual {res.max():.3e} exceeds 1e-8")


def discrete_limits(mask: np.ndarray, m: int) -> DiscreteLimits:
    return DiscreteLimits(
        mask.shape[0], discrete_dirichlet_limit(mask, m), discrete_neumann_limit(mask, m)
    )


def expand_multiplicity(entries) -> np.ndarray:
    """Values of a limit-spectrum list, repeated by multiplicity."""
    out = []
    for e in entries:
        out.extend([e.value] * e.multiplicity)
    return np.array(out)
