import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ITSA_SKIP_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "itsa._kernels._ckernels",
                    ["src/itsa/_kernels/_ckernels.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        # No Cython available: install runs with the pure-Python kernels.
        ext_modules = []

setup(ext_modules=ext_modules)
