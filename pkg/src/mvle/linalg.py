"""Dense symmetric eigensolvers and ridge regression.

All routines work on float64 ``numpy`` arrays and are deterministic:
eigenvalues come back in ascending order and every eigenvector has its
largest-magnitude entry forced positive. Backed by LAPACK's symmetric
drivers via ``numpy.linalg``; the generalized problem with a diagonal
metric is reduced to a standard symmetric one by whitening, never by
forming a nonsymmetric product.

Tolerances are fixed module-wide: inputs are validated at 1e-10
(relative), results are certified at 1e-8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NoConvergenceError,
    NonSymmetricError,
    SingularDegreeError,
    SingularMatrixError,
)

INPUT_TOL = 1e-10
RESULT_TOL = 1e-8


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues in ascending order with column-aligned eigenvectors.

    ``vectors[:, j]`` belongs to ``values[j]``.
    """

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert ``a`` to a 2-D finite float64 array."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf")
    return m


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column made positive; argmax breaks
    # magnitude ties by lowest row index, so the convention is total.
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eig(a) -> EigenResult:
    """Full eigendecomposition of a symmetric matrix.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Symmetric within 1e-10 relative to its own infinity norm. The
        matrix is averaged with its transpose before decomposition so
        roundoff-level asymmetry cannot leak into the result.

    Returns
    -------
    EigenResult
        Ascending eigenvalues and orthonormal eigenvectors.

    Raises
    ------
    NonSymmetricError
        If the symmetry check fails.
    NoConvergenceError
        If the underlying iteration does not converge.
    """
    m = as_matrix(a, "a")
    n, k = m.shape
    if n != k:
        raise ValueError(f"a must be square, got shape {m.shape}")
    scale = max(float(np.abs(m).max()), 1e-300)
    asym = float(np.abs(m - m.T).max())
    if asym > INPUT_TOL * scale:
        raise NonSymmetricError(
            f"matrix is not symmetric: max |A - A^T| = {asym:.3e} "
            f"exceeds {INPUT_TOL:.0e} * {scale:.3e}"
        )
    sym = 0.5 * (m + m.T)
    try:
        values, vectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergenceError(f"eigendecomposition failed: {exc}") from exc
    return EigenResult(values=values, vectors=_fix_signs(vectors))


def generalized_eig_diag(l, d) -> EigenResult:
    """Solve ``L y = lambda D y`` for symmetric ``L`` and positive diagonal ``D``.

    ``d`` may be the diagonal as a 1-D vector or as a full diagonal
    matrix. The problem is whitened to ``D^{-1/2} L D^{-1/2}``, explicitly
    re-symmetrized, solved with :func:`sym_eig`, and the eigenvectors are
    mapped back so that ``Y^T D Y = I``.

    Raises
    ------
    SingularDegreeError
        If any diagonal entry of ``D`` is zero or negative.
    """
    lm = as_matrix(l, "l")
    dv = np.asarray(d, dtype=np.float64)
    if dv.ndim == 2:
        dv = np.diagonal(dv).copy()
    if dv.ndim != 1 or dv.shape[0] != lm.shape[0]:
        raise ValueError(
            f"d must be a diagonal of length {lm.shape[0]}, got shape {dv.shape}"
        )
    if not np.all(np.isfinite(dv)):
        raise ValueError("d contains NaN or Inf")
    bad = np.flatnonzero(dv <= 0.0)
    if bad.size:
        raise SingularDegreeError(
            f"diagonal entry {bad[0]} is {dv[bad[0]]:.6g}; all degrees must be positive"
        )
    inv_sqrt = 1.0 / np.sqrt(dv)
    white = inv_sqrt[:, None] * lm * inv_sqrt[None, :]
    result = sym_eig(white)
    vectors = inv_sqrt[:, None] * result.vectors
    return EigenResult(values=result.values, vectors=_fix_signs(vectors))


def ridge_solve(h, t, lam: float) -> np.ndarray:
    """Ridge-regularized least squares ``argmin ||H b - T||^2 + lam ||b||^2``.

    Solves the normal equations ``(H^T H + lam I) b = H^T T`` directly.
    ``t`` may be a vector or a matrix of stacked targets; the result has
    the matching shape.

    Raises
    ------
    SingularMatrixError
        If ``lam == 0`` and ``H^T H`` is rank-deficient.
    """
    hm = as_matrix(h, "h")
    tv = np.asarray(t, dtype=np.float64)
    single = tv.ndim == 1
    tm = tv[:, None] if single else as_matrix(tv, "t")
    if tm.shape[0] != hm.shape[0]:
        raise ValueError(
            f"h has {hm.shape[0]} rows but t has {tm.shape[0]}"
        )
    if not np.all(np.isfinite(tm)):
        raise ValueError("t contains NaN or Inf")
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    gram = hm.T @ hm
    gram = 0.5 * (gram + gram.T)
    p = gram.shape[0]
    if lam == 0.0:
        rank = np.linalg.matrix_rank(gram, hermitian=True)
        if rank < p:
            raise SingularMatrixError(
                f"H^T H has rank {rank} < {p} and lam = 0; "
                "supply a positive ridge parameter"
            )
    else:
        gram = gram + lam * np.eye(p)
    rhs = hm.T @ tm
    try:
        beta = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(f"normal equations are singular: {exc}") from exc
    return beta[:, 0] if single else beta
