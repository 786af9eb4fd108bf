"""Build the optional compiled search kernel.

The package works without it (a pure-Python engine is selected at import
time), but the compiled kernel is typically 20-100x faster on the bounded
config-graph searches that dominate runtime.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("stategrammar._kernel", ["src/stategrammar/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
