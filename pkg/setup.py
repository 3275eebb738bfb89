"""Build script: compiles the optional term-arithmetic extension.

Set GBTCYCLES_NO_EXT=1 to skip compilation; the package then runs on the
pure-Python kernel in gbtcycles._termops_py.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GBTCYCLES_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gbtcycles/_termops.pyx"],
        language_level=3,
    )

setup(ext_modules=ext_modules)
