import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "weillab.kernels._fastcore",
                ["src/weillab/kernels/_fastcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environments without Cython
    sys.stderr.write("weillab: compiled kernel skipped (%s); pure fallback will be used\n" % exc)

setup(ext_modules=ext_modules)
