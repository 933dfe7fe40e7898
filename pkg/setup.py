"""Build script: compiles the optional fast kernel extension.

The package works without the extension (a pure-Python kernel is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("diskhop._core", ["src/diskhop/_core.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
