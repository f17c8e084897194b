from setuptools import Extension, setup
from Cython.Build import cythonize
import numpy as np

# Compiled hot kernels (coincidence sweep, renewal thinning). The package
# falls back to the numpy implementations in fluoro.kernels._pykern if this
# extension is missing, so a failed build still yields a working install.
ext_modules = [
    Extension(
        "fluoro.kernels._ckern",
        ["src/fluoro/kernels/_ckern.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(ext_modules, language_level="3"))
