"""Backend selector for the sparse-monomial kernels.

Imports the compiled extension when it is available and falls back to the
pure-Python implementation otherwise.  Set ``EFGL_PURE_PYTHON=1`` in the
environment to force the fallback (useful for benchmarking and debugging).
"""

import os

if os.environ.get("EFGL_PURE_PYTHON") == "1":
    from efgl._poly_fallback import BACKEND, add_dicts, mul_dicts, scale_dict
else:
    try:
        from efgl._poly_kernel import BACKEND, add_dicts, mul_dicts, scale_dict
    except ImportError:
        from efgl._poly_fallback import (BACKEND, add_dicts, mul_dicts,
                                         scale_dict)

__all__ = ["BACKEND", "add_dicts", "mul_dicts", "scale_dict"]
