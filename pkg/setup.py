from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or a C compiler) the
# package falls back to the pure-Python kernel at import time.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    # No -ffast-math: the kernel must stay IEEE-exact so compiled and
    # pure-Python scoring produce bit-identical rankings.
    ext_modules = cythonize(
        [
            Extension(
                "raredx._kernels.c_kernel",
                ["src/raredx/_kernels/c_kernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
