import os

from setuptools import setup

ext_modules = []
if os.environ.get("EFGL_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/efgl/_poly_kernel.pyx"], language_level=3
        )
    except Exception:
        # No Cython (or no compiler): install runs fine on the pure-Python
        # kernel selected by efgl._kernel at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
