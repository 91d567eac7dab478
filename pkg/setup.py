"""Build the optional Cython kernel; the package falls back to NumPy without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("JCREVIVAL_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "jcrevival._gk",
                    ["src/jcrevival/_gk.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
