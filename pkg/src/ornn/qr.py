"""Constructive QR decomposition over the reflection-chain parametrisation.

Every full-rank square matrix factors as (reflection chain) x (upper
triangular with positive diagonal).  Applied to an orthogonal matrix the
triangular factor collapses to the identity, which is exactly the argument
that the parametrisation with m = n reaches all of O(n); the decomposition
below is also the inverse map used to import a dense orthogonal matrix into
stack form.
"""

from __future__ import annotations

import numpy as np

from .householder import materialize, orthogonality_error
from .stack import DecompositionError, NumericalError, ReflectionStack, ShapeError

# Relative slack replacing the exact "column already aligned" comparison;
# exact float equality there is brittle under rounding.
ALIGNED_RTOL = 1e-12

# A column tail below this norm means the matrix is numerically rank
# deficient for this factorisation.
RANK_TOL = 1e-14


def qr_decompose(a: np.ndarray):
    """Factor ``a = W R`` with W a full reflection stack and R upper triangular.

    Parameters
    ----------
    a : (n, n) array_like
        Numerically full-rank matrix.

    Returns
    -------
    stack : ReflectionStack
        Stack with ``m == n`` whose materialisation is the orthogonal factor.
    r : (n, n) ndarray
        Upper triangular with strictly positive diagonal.

    Raises
    ------
    DecompositionError
        If a column tail vanishes (rank-deficient input); ``column`` names
        the failing 0-based column.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n < 2:
        raise ShapeError("need n >= 2")
    r = a.copy()
    vectors = np.zeros((n, n - 1))
    scale = max(np.linalg.norm(a), 1.0)
    for k in range(n - 1):
        tail = r[k:, k]
        norm = np.linalg.norm(tail)
        if norm <= RANK_TOL * scale:
            raise DecompositionError(
                f"column {k} is numerically rank deficient (|tail|={norm:.3e})",
                column=k)
        if norm - tail[0] < ALIGNED_RTOL * norm:
            # Tail already equals +norm*e1: pick the unit vector whose
            # reflection fixes this column (it only flips the last row).
            u = np.zeros(n - k)
            u[-1] = 1.0
        else:
            u = tail.copy()
            u[0] -= norm
            u /= np.linalg.norm(u)
        vectors[k:, k] = u
        r[k:, :] -= np.outer(2.0 * u, u @ r[k:, :])
    if abs(r[-1, -1]) <= RANK_TOL * scale:
        raise DecompositionError(
            f"column {n - 1} is numerically rank deficient "
            f"(|R[n-1,n-1]|={abs(r[-1, -1]):.3e})", column=n - 1)
    sign = 1.0 if r[-1, -1] > 0 else -1.0
    r[-1, :] *= sign
    stack = ReflectionStack(n=n, m=n, vectors=vectors, sign=sign).validate()
    return stack, np.triu(r)


def decompose_orthogonal(q: np.ndarray, orth_tol: float = 1e-8,
                         residual_tol: float = 1e-8) -> ReflectionStack:
    """Exact stack representation of an orthogonal matrix.

    Runs :func:`qr_decompose` and asserts the triangular factor is the
    identity, which must hold whenever ``q`` is orthogonal.
    """
    q = np.asarray(q, dtype=np.float64)
    err = orthogonality_error(q)
    if err >= orth_tol:
        raise ValueError(
            f"input is not orthogonal: |Q'Q - I|_F = {err:.3e} >= {orth_tol:g}")
    stack, r = qr_decompose(q)
    residual = np.linalg.norm(r - np.eye(q.shape[0]))
    if residual > residual_tol:
        raise NumericalError(
            f"triangular factor deviates from identity by {residual:.3e}")
    return stack


def reconstruction_error(stack: ReflectionStack, r: np.ndarray,
                         a: np.ndarray) -> float:
    """Frobenius norm of materialize(stack) @ r - a."""
    return float(np.linalg.norm(materialize(stack) @ r - np.asarray(a)))
