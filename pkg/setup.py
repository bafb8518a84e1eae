"""Build hook for the optional compiled kernel.

If Cython is available the ``res_kernel._kernels`` extension is compiled;
otherwise the package installs with the pure-Python kernel only.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build-time fallback
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        ["src/res_kernel/_kernels.pyx"],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        quiet=True,
    )

setup(ext_modules=ext_modules)
