"""Pure-NumPy reflection-chain kernels.

Shared conventions with the compiled backend:

* ``ut`` is the reflection matrix transposed, shape ``(num_cols, n)``,
  C-contiguous, so row ``j`` is one zero-padded reflection vector with its
  nonzero tail starting at index ``j``.
* ``sq`` holds the squared column norms, shape ``(num_cols,)``.
* Hidden states are ``(n, batch)`` float64 arrays.
* The forward recurrence updates full columns (the structural zeros
  contribute exact zeros), while the coefficient dot products and the
  backward running-vector update touch only the nonzero tails.  This is the
  operation layout the flop-count contracts are written against.
"""

from __future__ import annotations

import numpy as np


def fused_forward(ut, sq, h):
    """Apply the reflection chain to ``h`` keeping all intermediate states.

    Returns ``(states, coeffs)`` where ``states`` has shape
    ``(num_cols + 1, n, batch)`` with ``states[num_cols] == h`` and
    ``states[0]`` the chain output, and ``coeffs`` has shape
    ``(num_cols, batch)`` with the per-reflection projection coefficients.
    """
    mc, n = ut.shape
    nb = h.shape[1]
    states = np.empty((mc + 1, n, nb))
    coeffs = np.empty((mc, nb))
    states[mc] = h
    for j in range(mc - 1, -1, -1):
        tail = ut[j, j:]
        c = (2.0 / sq[j]) * (tail @ states[j + 1, j:, :])
        coeffs[j] = c
        states[j] = states[j + 1] - c[None, :] * ut[j][:, None]
    return states, coeffs


def fused_backward(ut, sq, states, coeffs, gc, g_out, gsum_out, cc_out):
    """One-step backward pass through the reflection chain.

    ``gc`` is the loss gradient at the chain output.  On return ``g_out``
    holds the gradient at the chain input, ``gsum_out`` (shape
    ``(num_cols, n)``) has the per-column parameter gradient, summed over the
    batch, added into it, and ``cc_out`` (shape ``(num_cols, batch)``) the
    backward projection coefficients.  Batch reduction runs in ascending
    sample order.
    """
    mc, n = ut.shape
    g_out[:] = gc
    for j in range(mc):
        tail = ut[j, j:]
        cc = (2.0 / sq[j]) * (tail @ g_out[j:, :])
        cc_out[j] = cc
        g_out[j:, :] -= cc[None, :] * tail[:, None]
        gsum_out[j] -= g_out @ coeffs[j] + states[j + 1] @ cc


def apply_chain(ut, sq, x):
    """Apply the reflection chain to ``x`` (shape ``(n, batch)``) in place."""
    mc = ut.shape[0]
    for j in range(mc - 1, -1, -1):
        tail = ut[j, j:]
        c = (2.0 / sq[j]) * (tail @ x[j:, :])
        x[j:, :] -= c[None, :] * tail[:, None]
    return x
