import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "qkdrec._kernels",
        ["src/qkdrec/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        optional=True,  # pure-python fallback is selected at import if the build fails
    ),
]

setup(ext_modules=cythonize(extensions, language_level="3"))
