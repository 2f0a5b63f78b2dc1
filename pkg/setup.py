"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; `tebde.kernels`
falls back to the pure-NumPy implementation when the compiled module is
absent (or when TEBDE_PURE_PYTHON=1 is set).
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "tebde._kernels_cy",
                ["src/tebde/_kernels_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
