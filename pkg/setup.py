"""Builds the optional compiled sampling core.

If Cython or a compiler is unavailable the package still installs and the
pure-Python kernels are used.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "critwin.sim._core",
                sources=["src/critwin/sim/_core.pyx"],
                # no fused multiply-add, so results match the Python kernels bit for bit
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
