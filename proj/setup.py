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
        out = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = [
            "cmake",
            str(Path(__file__).parent.resolve()),
            "-DNLAB_BUILD_TESTS=OFF",
            f"-DCMAKE_LIBRARY_OUTPUT_DIRECTORY={out}",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
            "-DCMAKE_BUILD_TYPE=Release",
        ]
        subprocess.check_call(cfg, cwd=build_dir)
        subprocess.check_call(
            ["cmake", "--build", ".", "--target", "_nlab", "-j", str(os.cpu_count() or 1)],
            cwd=build_dir,
        )


setup(
    ext_modules=[CMakeExtension("nlab._nlab")],
    cmdclass={"build_ext": CMakeBuild},
)
