"""Build the optional compiled elimination kernel.

The package works without it: ``graded_tannakian.linalg`` falls back to the
pure-Python kernel when ``_kernels`` cannot be imported.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("graded_tannakian._kernels", ["src/graded_tannakian/_kernels.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
