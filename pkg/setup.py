"""Build script for the optional compiled propagation kernel.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile only costs speed.
"""
import sys

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fluxinit._kernels._reduced_cy",
                ["src/fluxinit/_kernels/_reduced_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"fluxinit: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
