from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off keeps the compiled sweep bit-identical to the numpy kernel.
extensions = [
    Extension(
        "rabigvm._jacobi",
        ["src/rabigvm/_jacobi.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
