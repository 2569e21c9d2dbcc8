"""Build script for the optional compiled kernel extension.

The package works without the extension (a numpy fallback is selected at
import time); building it just makes the hot loops fast.
"""
import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "ecgforge.kernels._native",
                ["src/ecgforge/kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffast-math lets gcc vectorize the sigmoid/tanh loops via libmvec
                extra_compile_args=["-O3", "-ffast-math", "-march=native"],
                extra_link_args=["-lmvec", "-lm"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
