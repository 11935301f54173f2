"""Numerical laboratory for sparse bilinear inverse problems.

Subpackages cover sparse signals and convolutions, randomized measurement
operators, norm multiplicativity constants of sparse convolutions, embedding
verification, l1 recovery, Fourier phase retrieval checks, and additive
combinatorics support compression.
"""

__version__ = "0.1.0"

from .signals import SparseVector  # noqa: F401
