"""Core types for chains of Householder reflections.

A transition matrix is represented implicitly by a stack of reflection
vectors.  With hidden size ``n`` and ``m`` factors, column ``j`` (0-based) of
``vectors`` stores a reflection vector of length ``n - j`` below ``j``
structural zeros.  The represented matrix is the product of the reflections,
applied rightmost-column first.  When ``m == n`` the last factor is not a
reflection but a diagonal sign acting on the final coordinate; it is stored
separately in ``sign`` and ``vectors`` then holds only ``n - 1`` columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Squared-norm floor below which a reflection vector is considered degenerate.
# Guards the 2/||u||^2 scaling without rejecting realistic initialisations.
EPS_MIN = 1e-30


class OrnnError(Exception):
    """Base class for errors raised by this package."""


class InvalidReflectionError(OrnnError):
    """A reflection vector is degenerate (squared norm below EPS_MIN)."""


class UnsupportedRegimeError(OrnnError):
    """The requested operation is not defined for this (n, m) regime."""


class NumericalError(OrnnError):
    """A numerical consistency check failed (singular solve, non-finite data)."""


class DecompositionError(OrnnError):
    """QR decomposition failed; ``column`` identifies the failing column."""

    def __init__(self, message: str, column: int | None = None):
        super().__init__(message)
        self.column = column


class ShapeError(OrnnError, ValueError):
    """Inputs have mutually inconsistent dimensions."""


@dataclass
class ReflectionStack:
    """Zero-padded reflection vectors plus the optional tail sign.

    Attributes
    ----------
    n : int
        Ambient (hidden) dimension.
    m : int
        Number of factors in the chain, ``1 <= m <= n``.  For ``m == n`` the
        chain includes the diagonal sign factor and ``vectors`` has ``n - 1``
        columns; otherwise it has ``m`` columns.
    vectors : (n, num_cols) float64 ndarray
        Column ``j`` holds a reflection vector of length ``n - j`` below
        ``j`` structural zeros.
    sign : float
        Tail sign in {-1.0, +1.0}; meaningful only when ``m == n``.
    """

    n: int
    m: int
    vectors: np.ndarray
    sign: float = 1.0

    @property
    def num_cols(self) -> int:
        """Number of stored reflection columns (``m``, or ``n - 1`` when m == n)."""
        return self.m if self.m < self.n else self.n - 1

    @property
    def has_sign(self) -> bool:
        return self.m == self.n

    def sq_norms(self) -> np.ndarray:
        """Squared norm of each reflection column, in storage order."""
        return np.einsum("ij,ij->j", self.vectors, self.vectors)

    def validate(self) -> "ReflectionStack":
        """Check structural invariants; raise on violation, return self."""
        n, m = self.n, self.m
        if not (1 <= m <= n):
            raise ShapeError(f"need 1 <= m <= n, got n={n}, m={m}")
        if self.vectors.shape != (n, self.num_cols):
            raise ShapeError(
                f"vectors shape {self.vectors.shape} != ({n}, {self.num_cols})"
            )
        if self.vectors.dtype != np.float64:
            raise ShapeError("vectors must be float64")
        for j in range(self.num_cols):
            head = self.vectors[:j, j]
            if j and np.any(head != 0.0):
                raise InvalidReflectionError(
                    f"column {j} has nonzero entries above the structural zero bound"
                )
        sq = self.sq_norms()
        bad = np.nonzero(sq < EPS_MIN)[0]
        if bad.size:
            raise InvalidReflectionError(
                f"reflection column {bad[0]} is degenerate (|u|^2={sq[bad[0]]:.3e})"
            )
        if self.has_sign and self.sign not in (-1.0, 1.0):
            raise InvalidReflectionError(f"sign must be +-1 when m == n, got {self.sign}")
        return self

    def copy(self) -> "ReflectionStack":
        return ReflectionStack(self.n, self.m, self.vectors.copy(), self.sign)

    @classmethod
    def random(cls, n: int, m: int, rng: np.random.Generator) -> "ReflectionStack":
        """Stack with Uniform(-1, 1) entries on each nonzero tail.

        The represented matrix depends on each vector only through its
        direction, so the range only sets the scale of parameter gradients.
        """
        num_cols = m if m < n else n - 1
        vectors = np.zeros((n, num_cols))
        for j in range(num_cols):
            vectors[j:, j] = rng.uniform(-1.0, 1.0, n - j)
        sign = 1.0
        if m == n:
            sign = -1.0 if rng.uniform() < 0.5 else 1.0
        return cls(n, m, vectors, sign).validate()


@dataclass
class CompactWY:
    """Compact WY form of a reflection product: the product equals I - U T^-1 U'.

    ``T`` is the upper-triangular factor built from the Gram matrix of the
    stored columns; ``mask`` is the constant Hadamard mask (strict upper
    triangle of ones plus half the identity) used by the closed-form gradient.
    """

    T: np.ndarray
    mask: np.ndarray = field(repr=False)

    @property
    def num_cols(self) -> int:
        return self.T.shape[0]
