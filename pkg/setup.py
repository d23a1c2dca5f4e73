"""Build shim: compiles the optional Cython kernel backend.

The package works without the extension (a pure-Python twin of the kernels
is selected at import time), so any failure here downgrades to a warning
instead of aborting the install.
"""

import warnings

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("ellsixj._kernels_cy", ["src/ellsixj/_kernels_cy.pyx"])],
        language_level=3,
    )
except Exception as exc:  # missing Cython or C compiler
    warnings.warn(f"building without compiled kernels: {exc}")

setup(ext_modules=ext_modules)
