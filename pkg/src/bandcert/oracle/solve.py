"""Lowest eigenpairs of the assembled operators.

Small operators go to LAPACK; larger ones to ARPACK in shift-invert mode
with a negative shift, which keeps the factorised matrix definite.  The
shift is proportional to the smallest diagonal entry so that a matrix and
its scalar multiple see the same relative problem.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .operator import DiscreteOperator

DENSE_LIMIT = 256
RESIDUAL_TOL = 1e-8
DEFLATION_OVERLAP = 0.9


class EigenSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    residuals: np.ndarray
    method: str
    deflated: bool = False
    vectors: np.ndarray | None = field(default=None, repr=False)


def _start_vector(size: int, dtype) -> np.ndarray:
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(size)
    if np.issubdtype(dtype, np.complexfloating):
        v = v + 1j * rng.standard_normal(size)
    return v.astype(dtype)


def backward_errors(mat, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """``||A v - lam v|| / ((||A|| + |lam|) ||v||)`` per pair, with the max-row-sum norm."""
    a_norm = float(abs(mat).sum(axis=1).max())
    res = mat @ vectors - vectors * values[np.newaxis, :]
    num = np.linalg.norm(res, axis=0)
    den = (a_norm + np.abs(values)) * np.linalg.norm(vectors, axis=0)
    return num / den


def lowest_eigenpairs(mat, count: int, shift: float, dense_limit: int = DENSE_LIMIT):
    """``count`` smallest eigenpairs of a Hermitian matrix."""
    size = mat.shape[0]
    if count >= size:
        raise EigenSolveError(f"requested {count} eigenpairs of a {size}x{size} operator")
    if size <= dense_limit:
        dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
        vals, vecs = sla.eigh(dense, subset_by_index=[0, count - 1])
        return vals, vecs, "dense"
    try:
        vals, vecs = spla.eigsh(
            mat, k=count, sigma=shift, which="LM",
            v0=_start_vector(size, mat.dtype), tol=0.0,
        )
    except spla.ArpackNoConvergence as exc:
        raise EigenSolveError(
            f"ARPACK did not converge: {len(exc.eigenvalues)} of {count} pairs "
            f"converged for a {size}x{size} operator (shift {shift!r})"
        ) from exc
    order = np.argsort(vals)
    return vals[order], vecs[:, order], "shift_invert"


def eigen_solve(
    op: DiscreteOperator, m: int, keep_vectors: bool = False, dense_limit: int = DENSE_LIMIT
) -> EigenResult:
    """The ``m`` smallest eigenvalues, with the constant mode removed for
    zero-mean problems."""
    mat = op.matrix
    count = m + (1 if op.deflate_constant else 0)
    shift = -float(mat.diagonal().real.min()) / op.n**2
    vals, vecs, method = lowest_eigenpairs(mat, count, shift, dense_limit=dense_limit)
    if op.deflate_constant:
        vals, vecs = deflate_constant(vals, vecs)
    res = backward_errors(mat, vals, vecs)
    if np.any(res > RESIDUAL_TOL):
        raise EigenSolveError(
            f"residuals {res.max():.3e} exceed {RESIDUAL_TOL:g} ({method}, size {op.size})"
        )
    return EigenResult(vals.real.copy(), res, method, op.deflate_constant, vecs if keep_vectors else None)


def deflate_constant(vals: np.ndarray, vecs: np.ndarray, weights: np.ndarray | None = None):
    """Drop the eigenpair that carries the constant vector."""
    ones = np.ones(vecs.shape[0]) if weights is None else weights
    ones = ones / np.linalg.norm(ones)
    overlap = np.abs(ones @ vecs) / np.linalg.norm(vecs, axis=0)
    pos = int(np.argmax(overlap))
    if overlap[pos] < DEFLATION_OVERLAP:
        raise EigenSolveError(
            f"no computed eigenvector is close to the constant mode (best overlap {overlap[pos]:.3f})"
        )
    keep = np.arange(len(vals)) != pos
    return vals[keep], vecs[:, keep]
