from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "memkinetics._kernels._fractional_cy",
                ["src/memkinetics/_kernels/_fractional_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Cython unavailable: ship the pure-Python kernels only.
    extensions = []

setup(ext_modules=extensions)
