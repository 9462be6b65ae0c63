"""Build script for the optional compiled kernels.

The pure-Python fallback in ``torus_scar._pykernels`` is used whenever the
extension is missing, so a failed or skipped build still yields a working
package.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TORUS_SCAR_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "torus_scar._kernels",
                    ["src/torus_scar/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3", "-ffp-contract=off", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
