from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "zsnft._kernels",
        ["src/zsnft/_kernels.pyx"],
        extra_compile_args=["-O3", "-fopenmp"],
        extra_link_args=["-fopenmp"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
