"""Build script: compiles the optional Cython kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a missing compiler must not break installation.
Set HARTMAN_NO_EXT=1 to skip the extension build entirely.
"""
import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to the pure-Python fallback on compiler failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"hartman: compiled kernel unavailable ({exc!r}); "
            "falling back to the pure-Python backend"
        )


ext_modules = []
cmdclass = {}
if os.environ.get("HARTMAN_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "hartman._kernel._cykernel",
                    ["src/hartman/_kernel/_cykernel.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules, cmdclass=cmdclass)
