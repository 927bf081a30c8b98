import numpy
from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize

extensions = cythonize(
    [
        Extension(
            "cavitymem._kernels._two_exc",
            ["src/cavitymem/_kernels/_two_exc.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
        )
    ],
    language_level=3,
)

setup(ext_modules=extensions)
