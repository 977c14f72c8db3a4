"""Build script for the optional compiled chain kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so the build is marked optional: a missing compiler degrades to
the fallback instead of failing the install.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hierarchyrank._mvr_c",
                ["src/hierarchyrank/_mvr_c.pyx"],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
