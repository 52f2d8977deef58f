"""Backend selection for the reflection-chain kernels.

The compiled extension is preferred when importable; the pure-NumPy fallback
is always available.  Set ``ORNN_FORCE_FALLBACK=1`` to skip the extension
(useful for benchmarking the two against each other).
"""

import os

from . import fallback

try:
    from . import _fused as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("ORNN_FORCE_FALLBACK"):
    active = _compiled
    BACKEND = "compiled"
else:
    active = fallback
    BACKEND = "fallback"


def compiled_available() -> bool:
    return _compiled is not None


def get_backend(name: str):
    """Return a kernel module by name ("compiled", "fallback" or "active")."""
    if name == "active":
        return active
    if name == "fallback":
        return fallback
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
