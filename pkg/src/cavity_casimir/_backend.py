"""Selects the compiled kernel when available.

Set ``CAVITY_CASIMIR_PURE=1`` to force the numpy implementation.
"""
import os

BACKEND = "python"
if os.environ.get("CAVITY_CASIMIR_PURE", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import wall_terms  # noqa: F401
        BACKEND = "cython"
    except ImportError:
        pass
if BACKEND == "python":
    from ._kernels_py import wall_terms  # noqa: F401,F811
