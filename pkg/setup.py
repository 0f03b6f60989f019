"""Build script: compiles the hot time-stepping kernel as a C extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile is not fatal for `pip install`.
"""
import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "kdvb_lpg._kernel._stepper",
                ["src/kdvb_lpg/_kernel/_stepper.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
