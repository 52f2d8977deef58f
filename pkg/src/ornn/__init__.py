"""Orthogonal transition matrices from Householder reflection chains.

Matrix-free kernels for applying and differentiating a chain of reflections,
a constructive QR decomposition over the same parametrisation, a complex
unitary variant with its real-space lift, and a small RNN training harness
with exact flop-count accounting.
"""

from ._kernels import BACKEND, compiled_available
from .backprop import GradientBundle, finite_diff_grad, grad_formulas, local_fpbp
from .householder import (
    build_compact_wy,
    chain_matvec,
    materialize,
    orthogonality_error,
    reflect_apply,
    wy_matvec,
)
from .qr import decompose_orthogonal, qr_decompose
from .stack import (
    EPS_MIN,
    CompactWY,
    DecompositionError,
    InvalidReflectionError,
    NumericalError,
    OrnnError,
    ReflectionStack,
    ShapeError,
    UnsupportedRegimeError,
)
from .tape import ForwardTape

__all__ = [
    "BACKEND",
    "EPS_MIN",
    "CompactWY",
    "DecompositionError",
    "ForwardTape",
    "GradientBundle",
    "InvalidReflectionError",
    "NumericalError",
    "OrnnError",
    "ReflectionStack",
    "ShapeError",
    "UnsupportedRegimeError",
    "build_compact_wy",
    "chain_matvec",
    "compiled_available",
    "decompose_orthogonal",
    "finite_diff_grad",
    "grad_formulas",
    "local_fpbp",
    "materialize",
    "orthogonality_error",
    "qr_decompose",
    "reflect_apply",
    "wy_matvec",
]

__version__ = "0.1.0"
