"""Build the optional compiled walk kernel.

The package works without it (a numpy fallback is selected at import time),
so a failed compile only costs speed. `python setup.py build_ext --inplace`
rebuilds in a source checkout.
"""
import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cubewalk.kernels._walk_cy",
                ["src/cubewalk/kernels/_walk_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
