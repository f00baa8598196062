"""Build script for the optional compiled orbit kernel.

The package is pure Python apart from one Cython extension that
accelerates integer orbit enumeration.  Everything works without the
extension; if the toolchain is unavailable the build falls back to a
pure-Python install instead of failing.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "rifslab._orbitkern",
                ["src/rifslab/_orbitkern.pyx"],
                language="c++",
                extra_compile_args=["-O2", "-std=c++17"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
