"""Build script: compiles the hot-loop extension when a toolchain is available.

The package works without the extension (a NumPy fallback is selected at
import time), so compilation failures are downgraded to a warning instead of
aborting the install.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            warnings.warn(f"skipping compiled backend ({exc}); "
                          "falling back to the NumPy implementation")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"could not build {ext.name} ({exc}); "
                          "falling back to the NumPy implementation")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; building without the compiled backend")
        return []
    ext = Extension(
        "stripfront._backend._core",
        ["src/stripfront/_backend/_core.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
