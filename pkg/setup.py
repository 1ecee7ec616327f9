"""Builds the optional Cython kernel; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/sygus_forge/_ckernel.pyx"],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
        quiet=True,
    )
except Exception as exc:  # no Cython or no compiler: fall back to pure Python
    print(f"warning: building without the compiled kernel ({exc})")

setup(ext_modules=ext_modules)
