"""Build script for the optional compiled kernels.

The Cython extension is marked ``optional``: if it cannot be compiled the
package still installs and falls back to the numpy kernels at import time.
"""
from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:  # no Cython or numpy at build time: pure install
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "selfdecomp._kernels._ckernels",
                ["src/selfdecomp/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
