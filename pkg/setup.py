"""Builds the optional compiled defuzzification kernel.

The package works without it (a NumPy fallback is selected at import);
building the extension just makes the per-point aggregation loop cheap.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "autometric._kernels.grid_cython",
                ["src/autometric/_kernels/grid_cython.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
