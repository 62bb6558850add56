"""Build script for the optional compiled convolution core.

The package is fully functional without the extension (a NumPy fallback is
selected at import); the build therefore soft-fails if Cython or a C
compiler is unavailable.
"""
import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/jacobi_deriv/_accel/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
    for ext in ext_modules:
        ext.include_dirs = include_dirs
except ImportError as exc:  # pragma: no cover
    warnings.warn(f"building without the compiled core ({exc}); using the NumPy fallback")

setup(ext_modules=ext_modules)
