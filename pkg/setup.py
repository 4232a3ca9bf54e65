"""Build script: compiles the optional Cython kernels.

The package works without them (pure-numpy fallbacks are selected at import
time), so a failed extension build downgrades to a warning instead of
aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"WARNING: building C extensions failed ({exc}); "
                  "gridmode will use the pure-python kernels", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: {ext.name} failed to build ({exc}); "
                  "falling back to pure-python kernel", file=sys.stderr)


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    exts = [
        Extension(
            "gridmode._kernels._lti",
            ["src/gridmode/_kernels/_lti.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
        ),
        Extension(
            "gridmode._kernels._tree",
            ["src/gridmode/_kernels/_tree.pyx"],
            include_dirs=[numpy.get_include()],
            extra_compile_args=["-O3"],
        ),
    ]
    return cythonize(exts, language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
