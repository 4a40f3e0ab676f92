from setuptools import setup, Extension

# The compiled kernel is optional: without Cython the package installs and
# runs on the numpy fallback.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "labprec._kernels",
                ["src/labprec/_kernels.pyx"],
                # no FMA contraction: results must match the numpy fallback bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3", "embedsignature": True},
    )

setup(ext_modules=ext_modules)
