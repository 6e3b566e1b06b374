import os

from setuptools import setup

# The compiled row-reduction kernel is optional: if Cython (or a C compiler)
# is unavailable the package falls back to the pure-Python twin at import
# time.  Set SUPERBRST_PURE=1 to skip the extension build entirely.
ext_modules = []
if os.environ.get("SUPERBRST_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/superbrst/_rowred.pyx"], language_level=3
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
