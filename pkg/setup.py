"""Optional Cython build of the eigen-kernels; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("HARDYLAB_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext = Extension(
            "hardylab._kernels",
            ["src/hardylab/_kernels.pyx"],
            include_dirs=[numpy.get_include()],
            # no contraction into FMA: keeps results bitwise equal to the Python fallback
            extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
        ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
