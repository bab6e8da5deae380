"""Build hook: compiles the optional kernel extension when Cython is available.

The package is fully functional without the extension; igsched.kernels falls
back to the numpy reference implementation at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/igsched/kernels/_core.pyx"],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [numpy.get_include()]
    for ext in ext_modules:
        ext.include_dirs.extend(include_dirs)
except ImportError:
    pass

setup(ext_modules=ext_modules)
