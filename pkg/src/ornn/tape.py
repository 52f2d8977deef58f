"""Per-step records produced by the forward chain and consumed by backprop."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ForwardTape:
    """Intermediates of one forward application of the reflection chain.

    Attributes
    ----------
    states : (n, num_cols + 1) float64 ndarray
        Successive hidden states: column ``num_cols`` is the state entering
        the reflection columns, column ``0`` is the chain output, and
        ``states[:, j] = states[:, j + 1] - coeffs[j] * vectors[:, j]``.
    coeffs : (num_cols,) float64 ndarray
        Projection coefficient of each reflection.
    sq_norms : (num_cols,) float64 ndarray
        Squared norm of each reflection column; computed once per pass.
    """

    states: np.ndarray
    coeffs: np.ndarray
    sq_norms: np.ndarray
