"""One-step gradients of the reflection chain, with independent oracles.

Three routes compute the same thing and cross-check each other:

* :func:`local_fpbp` -- the fused kernel; forward pass plus backward pass in
  O(n m), the production path.
* :func:`grad_formulas` -- the closed-form expression through the compact WY
  factor and two triangular solves; dense oracle, m <= n - 1 only.
* :func:`finite_diff_grad` -- central differences on the scalar loss
  g'(W(U) h); slow numerical oracle, every regime.

The parameter matrix has structural zeros above the reflection tails; the
gradient returned in a bundle is always projected so those entries are exact
zeros, while ``d_vectors_raw`` keeps the unprojected kernel output for
cross-implementation comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels
from .householder import build_compact_wy, kernel_inputs
from .stack import ReflectionStack, ShapeError, UnsupportedRegimeError
from .tape import ForwardTape


@dataclass
class GradientBundle:
    """Gradients of a scalar loss through one chain application.

    ``d_vectors`` matches the stack's storage shape with structural zeros
    forced to exact 0.0; ``d_sign`` is identically zero (the tail sign is a
    projected, non-trainable parameter); ``d_hidden`` is the gradient with
    respect to the chain input.  ``bp_coeffs`` and ``d_vectors_raw`` are
    retained for testing and may be None for oracle-produced bundles.
    """

    d_vectors: np.ndarray
    d_hidden: np.ndarray
    d_sign: float = 0.0
    bp_coeffs: np.ndarray | None = None
    d_vectors_raw: np.ndarray | None = None


def zero_structural(arr: np.ndarray) -> np.ndarray:
    """Force the entries above each reflection tail to exact zero, in place."""
    mc = arr.shape[1]
    for j in range(1, mc):
        arr[:j, j] = 0.0
    return arr


def _check_vec(name: str, v: np.ndarray, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (n,):
        raise ShapeError(f"{name} has shape {v.shape}, expected ({n},)")
    return v


def local_fpbp(stack: ReflectionStack, h_prev: np.ndarray, g_c: np.ndarray):
    """Fused one-step forward and backward pass.

    Parameters
    ----------
    stack : ReflectionStack
    h_prev : (n,) array_like
        Hidden state entering the transition.
    g_c : (n,) array_like
        Loss gradient at the chain output.

    Returns
    -------
    c : (n,) ndarray
        Chain output (the transition matrix applied to ``h_prev``).
    bundle : GradientBundle
    tape : ForwardTape
    """
    stack.validate()
    h_prev = _check_vec("h_prev", h_prev, stack.n)
    g_c = _check_vec("g_c", g_c, stack.n)
    ut, sq = kernel_inputs(stack)
    mc, n = ut.shape

    col = h_prev.reshape(-1, 1).copy()
    if stack.has_sign:
        col[-1, 0] *= stack.sign
    states, coeffs = _kernels.active.fused_forward(ut, sq, col)

    g = np.empty((n, 1))
    gsum = np.zeros((mc, n))
    cc = np.empty((mc, 1))
    gc_col = np.ascontiguousarray(g_c.reshape(-1, 1))
    _kernels.active.fused_backward(ut, sq, states, coeffs, gc_col, g, gsum, cc)

    d_hidden = g[:, 0].copy()
    if stack.has_sign:
        d_hidden[-1] *= stack.sign
    raw = np.asarray(gsum).T.copy()
    bundle = GradientBundle(d_vectors=zero_structural(raw.copy()),
                            d_hidden=d_hidden,
                            bp_coeffs=np.asarray(cc)[:, 0].copy(),
                            d_vectors_raw=raw)
    tape = ForwardTape(states=np.asarray(states)[:, :, 0].T.copy(),
                       coeffs=np.asarray(coeffs)[:, 0].copy(),
                       sq_norms=sq)
    return tape.states[:, 0].copy(), bundle, tape


def grad_formulas(stack: ReflectionStack, h: np.ndarray,
                  g_c: np.ndarray) -> GradientBundle:
    """Closed-form chain gradients through the compact WY factor.

    Only defined for ``m <= n - 1``; with the tail sign present use
    :func:`local_fpbp`, which handles it as a separate fixed factor.
    """
    stack.validate()
    if stack.has_sign:
        raise UnsupportedRegimeError(
            "closed-form gradients cover m <= n - 1; use local_fpbp for m == n")
    h = _check_vec("h", h, stack.n)
    g_c = _check_vec("g_c", g_c, stack.n)
    wy = build_compact_wy(stack)
    u = stack.vectors
    h_c = scipy.linalg.solve_triangular(wy.T, u.T @ h, lower=False)
    c_c = scipy.linalg.solve_triangular(wy.T, u.T @ g_c, lower=False, trans="T")
    b = wy.mask
    raw = (u @ (np.outer(h_c, c_c) * b.T + np.outer(c_c, h_c) * b)
           - np.outer(g_c, h_c) - np.outer(h, c_c))
    d_hidden = g_c - u @ c_c
    return GradientBundle(d_vectors=zero_structural(raw.copy()),
                          d_hidden=d_hidden,
                          bp_coeffs=c_c,
                          d_vectors_raw=raw)


def finite_diff_grad(stack: ReflectionStack, h: np.ndarray, g_c: np.ndarray,
                     eps: float = 1e-6) -> GradientBundle:
    """Central-difference gradients of the scalar loss g_c' (W h).

    Perturbs every nonzero entry of the parameter matrix (structural zeros
    are skipped and stay zero in the result) and every entry of ``h``.  The
    tail sign, when present, is held fixed.
    """
    stack.validate()
    if eps <= 0:
        raise ValueError("eps must be positive")
    h = _check_vec("h", h, stack.n)
    g_c = _check_vec("g_c", g_c, stack.n)
    apply_chain = _kernels.active.apply_chain
    sign = stack.sign if stack.has_sign else None

    def loss(ut, hh):
        col = hh.reshape(-1, 1).copy()
        if sign is not None:
            col[-1, 0] *= sign
        sq = np.einsum("ij,ij->i", ut, ut)
        out = np.asarray(apply_chain(ut, sq, col))
        return float(g_c @ out[:, 0])

    ut = np.ascontiguousarray(stack.vectors.T)
    mc, n = ut.shape
    d_vectors = np.zeros((n, mc))
    for j in range(mc):
        for i in range(j, n):
            orig = ut[j, i]
            ut[j, i] = orig + eps
            lp = loss(ut, h)
            ut[j, i] = orig - eps
            lm = loss(ut, h)
            ut[j, i] = orig
            d_vectors[i, j] = (lp - lm) / (2.0 * eps)
    d_hidden = np.zeros(n)
    hw = h.copy()
    for i in range(n):
        orig = hw[i]
        hw[i] = orig + eps
        lp = loss(ut, hw)
        hw[i] = orig - eps
        lm = loss(ut, hw)
        hw[i] = orig
        d_hidden[i] = (lp - lm) / (2.0 * eps)
    return GradientBundle(d_vectors=d_vectors, d_hidden=d_hidden)
