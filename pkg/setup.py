import numpy
from setuptools import Extension, setup

# The compiled kernels are an optional speed-up: if Cython (or a C compiler)
# is unavailable the package still installs and falls back to the pure-NumPy
# implementation in taildep._kernels_py.
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "taildep._kernels",
                ["src/taildep/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
