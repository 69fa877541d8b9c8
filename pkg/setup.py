"""Builds the optional Cython counting kernel.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed build here should not block installation from
a source tree that lacks a C toolchain.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension(
            "mechforge.miner._kernels._counting_cy",
            ["src/mechforge/miner/_kernels/_counting_cy.pyx"],
            extra_compile_args=["-O3"],
        )],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
