"""Build script: compiles the optional packet-kernel extension.

The extension is a pure speedup; if Cython or a C compiler is missing the
install continues and the package falls back to the Python kernels.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            print(f"warning: extension build skipped ({exc}); "
                  f"using the pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} build failed ({exc}); "
                  f"using the pure-Python kernels")


ext_modules = []
if not os.environ.get("RAINBOWCC_PURE"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("rainbowcc._kernels", ["src/rainbowcc/_kernels.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython not available; using the pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
