from setuptools import setup, Extension
from Cython.Build import cythonize

ext = Extension(
    "ecotail._kernels._speedups",
    ["src/ecotail/_kernels/_speedups.pyx"],
)

setup(
    ext_modules=cythonize(ext, language_level=3),
)
