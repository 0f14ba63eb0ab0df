"""Build script: compiles the hot-kernel extension when Cython and a C
compiler are available. The package works without it (pure NumPy fallback),
so failures here only cost speed."""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "recast._kernels._core",
                ["src/recast/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=extensions)
