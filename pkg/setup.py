"""Build the optional compiled echelon kernel.

Without Cython (or a C compiler) the package still installs and uses the
pure-Python kernel.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SBLOB_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("sblob._echelon", ["src/sblob/_echelon.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
