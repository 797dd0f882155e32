from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cellfree_assoc._munkres_ext",
                ["src/cellfree_assoc/_munkres_ext.pyx"],
                include_dirs=[np.get_include()],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
