"""Matrix-free products of Householder reflections and their dense forms.

The represented transition matrix never has to be materialised: applying it
to a vector costs O(n m) through the kernel backends.  Dense materialisation
and the compact WY form are provided as independent cross-check paths.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from . import _kernels
from .stack import (
    EPS_MIN,
    CompactWY,
    InvalidReflectionError,
    NumericalError,
    ReflectionStack,
    ShapeError,
    UnsupportedRegimeError,
)
from .tape import ForwardTape


def kernel_inputs(stack: ReflectionStack):
    """Transposed reflection matrix and squared norms, as the kernels expect."""
    ut = np.ascontiguousarray(stack.vectors.T)
    sq = np.einsum("ij,ij->i", ut, ut)
    return ut, sq


def reflect_apply(k: int, u: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply the reflection determined by ``u`` to the last ``k`` coordinates.

    Parameters
    ----------
    k : int
        Size of the reflected subspace, ``2 <= k <= len(x)``.
    u : (k,) array_like
        Reflection vector; only its direction matters.
    x : (n,) array_like
        Vector to transform.

    Returns
    -------
    (n,) ndarray
        ``x`` with its last ``k`` coordinates reflected about the hyperplane
        orthogonal to ``u``; the first ``n - k`` coordinates are unchanged.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    n = x.shape[0]
    if x.ndim != 1 or u.ndim != 1 or u.shape[0] != k or not 2 <= k <= n:
        raise ShapeError(f"need 2 <= k <= n and len(u) == k, got k={k}, "
                         f"u{u.shape}, x{x.shape}")
    sq = float(u @ u)
    if sq < EPS_MIN:
        raise InvalidReflectionError(f"degenerate reflection vector (|u|^2={sq:.3e})")
    y = x.copy()
    y[n - k:] -= (2.0 / sq) * (u @ x[n - k:]) * u
    return y


def chain_matvec(stack: ReflectionStack, h: np.ndarray):
    """Apply the full reflection chain to ``h``.

    Returns ``(C, tape)`` where ``C`` is the product of all factors applied
    to ``h`` and ``tape`` records the intermediate states, projection
    coefficients and squared norms needed by the backward pass.  When
    ``m == n`` the tail sign acts first, and ``tape.states[:, -1]`` is the
    post-sign state entering the reflection columns.
    """
    stack.validate()
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (stack.n,):
        raise ShapeError(f"h has shape {h.shape}, expected ({stack.n},)")
    ut, sq = kernel_inputs(stack)
    col = h.reshape(-1, 1).copy()
    if stack.has_sign:
        col[-1, 0] *= stack.sign
    states, coeffs = _kernels.active.fused_forward(ut, sq, col)
    tape = ForwardTape(states=np.asarray(states)[:, :, 0].T.copy(),
                       coeffs=np.asarray(coeffs)[:, 0].copy(),
                       sq_norms=sq)
    return tape.states[:, 0].copy(), tape


def materialize(stack: ReflectionStack) -> np.ndarray:
    """Dense transition matrix represented by the stack."""
    stack.validate()
    ut, sq = kernel_inputs(stack)
    w = np.eye(stack.n)
    if stack.has_sign:
        w[-1, -1] = stack.sign
    return np.asarray(_kernels.active.apply_chain(ut, sq, w))


def orthogonality_error(m: np.ndarray) -> float:
    """Frobenius norm of M'M - I."""
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {m.shape}")
    return float(np.linalg.norm(m.T @ m - np.eye(m.shape[0])))


def build_compact_wy(stack: ReflectionStack) -> CompactWY:
    """Triangular factor of the compact WY form of the reflection product.

    Defined for ``m <= n - 1``; with the tail sign present the product is no
    longer a plain reflection chain and the sign factor must stay separate.
    """
    stack.validate()
    if stack.has_sign:
        raise UnsupportedRegimeError(
            "compact WY form covers m <= n - 1; for m == n apply the tail "
            "sign as a separate factor")
    gram = stack.vectors.T @ stack.vectors
    t = np.triu(gram, 1) + 0.5 * np.diag(np.diag(gram))
    mc = stack.num_cols
    mask = np.triu(np.ones((mc, mc)), 1) + 0.5 * np.eye(mc)
    return CompactWY(T=t, mask=mask)


def wy_matvec(stack: ReflectionStack, wy: CompactWY, h: np.ndarray) -> np.ndarray:
    """Apply (I - U T^-1 U') to ``h`` through the compact WY form.

    This is the dense-path oracle for the fused kernel: its output must agree
    with :func:`chain_matvec` to near machine precision.
    """
    stack.validate()
    if stack.has_sign:
        raise UnsupportedRegimeError("wy_matvec covers m <= n - 1")
    if wy.num_cols != stack.num_cols:
        raise ShapeError("compact WY factor was built from a different stack")
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (stack.n,):
        raise ShapeError(f"h has shape {h.shape}, expected ({stack.n},)")
    u = stack.vectors
    try:
        y = scipy.linalg.solve_triangular(wy.T, u.T @ h, lower=False)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"triangular factor is singular: {exc}") from exc
    return h - u @ y
