"""Build script for the optional compiled kernels.

``python setup.py build_ext --inplace`` drops the extension next to the
pure-python fallback; without Cython (or a compiler) the package still
works, selecting the fallback at import.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "perrontree._kernels._fast",
                ["src/perrontree/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
