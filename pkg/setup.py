"""Build script: compiles the optional fast kernel extension.

The package works without the extension (the pure backend is selected at
import time), so any compilation failure downgrades to a pure-Python install
instead of aborting.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("weightlab._kernels.core", ["src/weightlab/_kernels/core.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"kernel extension skipped ({exc}); pure backend will be used")
    extensions = []

setup(ext_modules=extensions)
