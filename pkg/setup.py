import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("LEXRERANK_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "lexrerank._kernels",
                    ["src/lexrerank/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    # no -ffast-math: backends must agree bit for bit
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
