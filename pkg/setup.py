"""Build script: compiles the bootstrap kernel extension when Cython is available.

A failed or unavailable compile is not fatal; the package falls back to the
pure-numpy kernel at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cdrisk.bootstrap._kernel_cy",
                ["src/cdrisk/bootstrap/_kernel_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
