"""Builds the `_loggrad` pybind11 extension by delegating to CMake.

setuptools handles metadata/packaging (see pyproject.toml); this file only
teaches build_ext to configure and build the CMake project and drop the
resulting extension module inside the `loggrad` package.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)
        source_dir = Path(__file__).parent.resolve()
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        import pybind11

        configure = [
            "cmake",
            "-S", str(source_dir),
            "-B", str(build_dir),
            "-DCMAKE_BUILD_TYPE=Release",
            "-DLOGGRAD_BUILD_TESTS=OFF",
            f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            f"-DPYTHON_EXECUTABLE={sys.executable}",
        ]
        subprocess.run(configure, check=True)
        subprocess.run(
            ["cmake", "--build", str(build_dir), "--target", "_loggrad"],
            check=True,
        )

        built = sorted(build_dir.glob("_loggrad*.so"))
        if not built:
            raise RuntimeError(f"_loggrad extension not produced in {build_dir}")
        shutil.copy2(built[0], out_path)


setup(
    ext_modules=[CMakeExtension("loggrad._loggrad")],
    cmdclass={"build_ext": CMakeBuild},
)
