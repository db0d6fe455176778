"""Symplectic blob algebra on tensor space: exact operators, ranks and certificates."""
from __future__ import annotations

from sblob.kernels import KERNEL
from sblob.scalars import CANONICAL_SIGMA, PRIMES, ModScalar, SigmaParams, specialize
from sblob.tensor_space import SparseVector

__all__ = ["KERNEL", "CANONICAL_SIGMA", "PRIMES", "ModScalar", "SigmaParams", "SparseVector", "specialize"]
__version__ = "0.1.0"
