"""Build the optional compiled kernels.

The package runs without them: ``toricpairs.kernels`` falls back to the
pure-Python implementations when ``_ckernels`` cannot be imported.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "toricpairs._ckernels",
                ["src/toricpairs/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
