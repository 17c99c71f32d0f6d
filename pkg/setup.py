"""Build hook: compile the optional reduction kernel if Cython is usable.

The package is fully functional without the extension; storop.reduction
falls back to the pure-Python kernel when the import fails.
"""

from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("storop._reduce_cy", ["src/storop/_reduce_cy.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"storop: skipping compiled kernel ({exc!r}); pure-Python fallback will be used")

setup(ext_modules=extensions)
