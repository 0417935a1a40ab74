"""Build the optional compiled core.

The ``addgraph._core`` extension accelerates the pair sweep and the
per-vertex triangle count. If Cython or a C compiler is unavailable the
package still installs and runs on the numpy fallback.
"""
import os
import sys

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ADDGRAPH_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        sys.stderr.write("Cython not found; building without the compiled core\n")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "addgraph._core",
                    ["src/addgraph/_core.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: results must match the fallback bit for bit
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
