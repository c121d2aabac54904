import sys

from setuptools import Extension, setup

# The compiled kernels are an optional speedup: the package falls back to
# the pure-Python implementations in stabilitylab._kernels._pykernels when
# the extension is missing or fails to build.
ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "stabilitylab._kernels._cykernels",
                ["src/stabilitylab/_kernels/_cykernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(f"stabilitylab: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
