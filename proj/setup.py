"""CMake-driven build of the conformap._core extension.

The CMake project is the single source of truth for sources and flags; this
shim only points setuptools at it.
"""

import os
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        out_dir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)

        configure = [
            "cmake",
            str(Path(__file__).parent.resolve()),
            f"-DPython3_EXECUTABLE={sys.executable}",
            # the extension lands directly inside the wheel's package dir
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out_dir}",
            "-DCONFORMAP_TESTS=OFF",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        subprocess.run(configure, cwd=build_dir, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "conformap_ext",
             "-j", str(os.cpu_count() or 2)],
            cwd=build_dir,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("conformap._core")],
    cmdclass={"build_ext": CMakeBuild},
)
