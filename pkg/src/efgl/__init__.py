"""Exact computer algebra for formal group laws and their equivariant
refinements over finitely presented commutative rings.

Everything is exact: integer, rational, and modular coefficients only, with
explicit truncation orders where formal power series are involved.
"""

from efgl._kernel import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
