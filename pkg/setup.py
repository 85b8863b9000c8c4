"""Build script: compiles the hot-loop kernels when Cython is available.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile only costs speed, never functionality.
Build in place for development with:

    python setup.py build_ext --inplace
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "spinerase._kernels._cykernels",
                ["src/spinerase/_kernels/_cykernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
