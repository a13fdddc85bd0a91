"""Builds the optional Cython kernel extension.

If Cython or a C compiler is unavailable the install still succeeds; the
package falls back to the numpy kernels at import time.
"""

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/coreselect/kernels/_core.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [np.get_include()]
except ImportError:
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
