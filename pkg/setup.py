import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; bandcert falls back at import
    cythonize = None

extensions = []
if cythonize is not None and not os.environ.get("BANDCERT_NO_EXT"):
    extensions = cythonize(
        [
            Extension(
                "bandcert._kernels",
                ["src/bandcert/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
