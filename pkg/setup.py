"""Build script for the optional compiled stepping kernel.

The package is fully functional without the extension (a pure-Python loop is
selected at import time); set HOTUNER_SKIP_EXT=1 to skip compilation on
machines without a C toolchain.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("HOTUNER_SKIP_EXT", "0").lower() not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "hotuner._fastloop",
            ["src/hotuner/_fastloop.pyx"],
            # -ffp-contract=off: keep float ops un-fused so the compiled loop
            # is bit-identical with the pure-Python reference steps.
            extra_compile_args=["-O2", "-ffp-contract=off"],
        )
        ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
