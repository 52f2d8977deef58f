"""Build script for the compiled reflection-chain kernels.

The extension is optional at runtime: if it fails to build or import,
the package falls back to the pure-NumPy kernels in ``ornn._kernels.fallback``.
"""

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

ext = Extension(
    "ornn._kernels._fused",
    ["src/ornn/_kernels/_fused.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize(ext, language_level=3))
