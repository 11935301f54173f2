"""Sparse complex vectors and convolution primitives.

A :class:`SparseVector` stores a complex vector of ambient dimension ``n``
as a strictly increasing support index list plus the values on the support.
On top of that the module provides linear and circular convolution,
circular correlation, time reversal and the unitary DFT.  All operations
are pure functions; vectors are immutable after construction and safe to
share between concurrent trial workers.

Conventions
-----------
The DFT is unitary with forward kernel ``exp(-2j*pi*k*l/n)/sqrt(n)``.
Under this normalization ``F(x circ y) = sqrt(n) * (Fx * Fy)`` for the
circular convolution on Z_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Entries whose magnitude falls below PRUNE_REL * ||x|| * ||y|| after a
# product operation are dropped from the support, so genuine cancellation
# (e.g. (1,1) * (1,-1)) produces an honest sumset support.
PRUNE_REL = 1e-14

# Convolutions with at most this many support pairs use the direct
# double-sum; larger instances go through the FFT.
DIRECT_PAIR_LIMIT = 512


@dataclass(frozen=True)
class DftConvention:
    """Record of the pinned DFT normalization and kernel sign."""

    normalization: str = "unitary"
    sign: str = "negative-exponent-forward"


UNITARY_DFT = DftConvention()


@dataclass(frozen=True)
class SparseVector:
    """Complex vector given by ambient dimension, support and values.

    Parameters
    ----------
    n : int
        Ambient dimension, positive.
    support : tuple of int
        Strictly increasing indices in ``[0, n)``.
    values : tuple of complex
        One nonzero value per support index.
    """

    n: int
    support: tuple
    values: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient dimension must be positive")
        support = tuple(int(k) for k in self.support)
        values = tuple(complex(v) for v in self.values)
        if len(support) != len(values):
            raise ValueError("support and values length mismatch")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError("support must be strictly increasing")
        if support and (support[0] < 0 or support[-1] >= self.n):
            raise ValueError("support index out of range")
        if any(v == 0 for v in values):
            raise ValueError("explicit zeros are not stored")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dense(cls, v, tol: float = 0.0) -> "SparseVector":
        """Sparsify a dense vector, dropping entries with ``|v_k| <= tol``."""
        v = np.asarray(v, dtype=complex).ravel()
        idx = np.flatnonzero(np.abs(v) > tol)
        return cls(v.size, tuple(idx.tolist()), tuple(v[idx].tolist()))

    @classmethod
    def basis(cls, n: int, j: int) -> "SparseVector":
        """Standard basis vector ``e_j`` in dimension ``n``."""
        return cls(n, (j,), (1.0 + 0.0j,))

    def dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=complex)
        if self.support:
            out[list(self.support)] = self.values
        return out

    def sparsity(self) -> int:
        return len(self.support)

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.values))

    def conj(self) -> "SparseVector":
        return SparseVector(self.n, self.support,
                            tuple(v.conjugate() for v in self.values))


def _from_accumulator(n: int, acc: dict, threshold: float) -> SparseVector:
    items = sorted((k, v) for k, v in acc.items() if abs(v) > threshold)
    return SparseVector(n, tuple(k for k, _ in items),
                        tuple(v for _, v in items))


def linear_convolve(x: SparseVector, y: SparseVector) -> SparseVector:
    """Convolution on Z: ``z_k = sum_i x_i y_{k-i}``.

    Supports are read as absolute positions starting at 0; the output
    ambient dimension is ``x.n + y.n - 1``.
    """
    n_out = x.n + y.n - 1
    threshold = PRUNE_REL * x.norm() * y.norm()
    if x.sparsity() * y.sparsity() < DIRECT_PAIR_LIMIT:
        acc: dict = {}
        for i, a in zip(x.support, x.values):
            for j, b in zip(y.support, y.values):
                acc[i + j] = acc.get(i + j, 0.0) + a * b
        return _from_accumulator(n_out, acc, threshold)
    z = np.fft.ifft(np.fft.fft(x.dense(), n_out) * np.fft.fft(y.dense(), n_out))
    return SparseVector.from_dense(z, tol=threshold)


def circular_convolve(x: SparseVector, y: SparseVector,
                      n: int | None = None) -> SparseVector:
    """Circular convolution on Z_n: ``z_k = sum_i x_i y_{(k-i) mod n}``."""
    if n is None:
        n = x.n
    if x.n != n or y.n != n:
        raise ValueError("ambient dimensions must equal n")
    threshold = PRUNE_REL * x.norm() * y.norm()
    if x.sparsity() * y.sparsity() < DIRECT_PAIR_LIMIT:
        acc: dict = {}
        for i, a in zip(x.support, x.values):
            for j, b in zip(y.support, y.values):
                k = (i + j) % n
                acc[k] = acc.get(k, 0.0) + a * b
        return _from_accumulator(n, acc, threshold)
    z = np.fft.ifft(np.fft.fft(x.dense()) * np.fft.fft(y.dense()))
    return SparseVector.from_dense(z, tol=threshold)


def circular_correlate(x: SparseVector, y: SparseVector,
                       n: int | None = None) -> SparseVector:
    """Circular correlation ``x (corr) y = x (circ) Gamma(conj(y))``.

    Equivalently ``sqrt(n) * F^*(Fx . conj(Fy))`` under the unitary DFT.
    """
    if n is None:
        n = x.n
    if x.n != n or y.n != n:
        raise ValueError("ambient dimensions must equal n")
    return circular_convolve(x, time_reverse(y.conj()), n)


def time_reverse(x: SparseVector) -> SparseVector:
    """Time reversal ``(Gamma x)_k = x_{(-k) mod n}`` (an involution)."""
    pairs = sorted(((-k) % x.n, v) for k, v in zip(x.support, x.values))
    return SparseVector(x.n, tuple(k for k, _ in pairs),
                        tuple(v for _, v in pairs))


def dft(x) -> np.ndarray:
    """Unitary DFT with forward kernel ``exp(-2j*pi*k*l/n)``."""
    v = x.dense() if isinstance(x, SparseVector) else np.asarray(x, dtype=complex)
    return np.fft.fft(v) / math.sqrt(v.size)


def idft(x) -> np.ndarray:
    """Inverse of :func:`dft`."""
    v = x.dense() if isinstance(x, SparseVector) else np.asarray(x, dtype=complex)
    return np.fft.ifft(v) * math.sqrt(v.size)


def random_sparse_vector(n: int, s: int, rng: np.random.Generator,
                         unit: bool = True) -> SparseVector:
    """Random s-sparse vector: uniform support, complex Gaussian values."""
    if not 1 <= s <= n:
        raise ValueError("need 1 <= s <= n")
    support = np.sort(rng.choice(n, size=s, replace=False))
    vals = rng.standard_normal(s) + 1j * rng.standard_normal(s)
    while np.any(vals == 0):  # pragma: no cover - probability zero
        vals = rng.standard_normal(s) + 1j * rng.standard_normal(s)
    if unit:
        vals = vals / np.linalg.norm(vals)
    return SparseVector(n, tuple(support.tolist()), tuple(vals.tolist()))
