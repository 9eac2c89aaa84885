"""Build the pybind11 extension directly from the C++ core sources.

The CMake build remains the primary way to get the CLI and the test
binaries; this file only exists so `pip install -e . --no-build-isolation`
produces the `elliptic_ident` module without any extra build backend.
"""

import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = sorted(glob.glob("src/*.cpp")) + ["python/bindings.cpp"]

ext = Pybind11Extension(
    "elliptic_ident",
    sources,
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
