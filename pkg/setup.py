"""Builds the optional compiled packing kernel.

The package works without it: a pure-Python kernel with identical
semantics is selected at import time when the extension is missing.
Set BINSTRETCH_NO_EXT=1 to skip compilation explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BINSTRETCH_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "binstretch._speedups",
                    ["src/binstretch/_speedups.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
