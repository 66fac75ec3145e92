from setuptools import setup, Extension
from Cython.Build import cythonize

ext_module = Extension(
    "coxhi._kernels_cy",
    ["src/coxhi/_kernels_cy.pyx"],
)

setup(
    ext_modules=cythonize(ext_module, language_level="3"),
)
