"""Measurement operator ensembles and lifted bilinear maps.

Provides :class:`LinearOperator` (apply/adjoint pairs with a descriptor for
deterministic reconstruction) for the Gaussian ensemble, random sign
diagonal, partial circulant demodulator, their composition (the universal
random demodulator) and the finite Weyl-Heisenberg dictionary, plus
:class:`BilinearMap` with rank-one lifting helpers.

Randomness is drawn from numpy's PCG64 generator seeded through
``np.random.SeedSequence``; the descriptor of every operator records the
ensemble name, dimensions and seeds, and rebuilding from the same
descriptor reproduces the action bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .signals import SparseVector


@dataclass
class LinearOperator:
    """m x n complex linear operator with explicit adjoint."""

    rows: int
    cols: int
    apply: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    descriptor: dict = field(default_factory=dict)

    def materialize(self) -> np.ndarray:
        """Dense matrix obtained by applying the operator to the basis."""
        eye = np.eye(self.cols, dtype=complex)
        cols = [self.apply(eye[:, j]) for j in range(self.cols)]
        return np.stack(cols, axis=1)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def identity_operator(n: int) -> LinearOperator:
    return LinearOperator(
        rows=n, cols=n,
        apply=lambda x: np.asarray(x, dtype=complex).copy(),
        adjoint=lambda w: np.asarray(w, dtype=complex).copy(),
        descriptor={"ensemble": "identity", "m": n, "n": n},
    )


def gaussian_operator(m: int, n: int, seed: int) -> LinearOperator:
    """i.i.d. complex Gaussian matrix scaled so that E||Ax||^2 = ||x||^2."""
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    rng = _rng(seed)
    a = (rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n)))
    a /= math.sqrt(2 * m)
    return LinearOperator(
        rows=m, cols=n,
        apply=lambda x: a @ np.asarray(x, dtype=complex),
        adjoint=lambda w: a.conj().T @ np.asarray(w, dtype=complex),
        descriptor={"ensemble": "gaussian", "m": m, "n": n, "seed": seed,
                    "rng": "pcg64"},
    )


def sign_diagonal(n: int, seed: int) -> LinearOperator:
    """Diagonal multiplier D_xi with i.i.d. +-1 entries (unitary)."""
    xi = _rng(seed).choice([-1.0, 1.0], size=n)
    return LinearOperator(
        rows=n, cols=n,
        apply=lambda x: xi * np.asarray(x, dtype=complex),
        adjoint=lambda w: xi * np.asarray(w, dtype=complex),
        descriptor={"ensemble": "sign_diagonal", "m": n, "n": n,
                    "seed": seed, "rng": "pcg64"},
    )


def _resolve_omega(m: int, n: int, omega) -> np.ndarray:
    if np.isscalar(omega):
        idx = np.sort(_rng(int(omega)).choice(n, size=m, replace=False))
    else:
        idx = np.asarray(sorted(int(k) for k in omega))
        if idx.size != m:
            raise ValueError("row index set must have m entries")
        if idx.size != np.unique(idx).size:
            raise ValueError("row indices must be distinct")
        if idx.size and (idx[0] < 0 or idx[-1] >= n):
            raise ValueError("row index out of range")
    return idx


def partial_circulant_demodulator(m: int, n: int, seed_eta: int, omega,
                                  gaussian_eta: bool = False) -> LinearOperator:
    """Row subsampling of a random-multiplier circulant.

    The circulant is ``F* D_eta F`` with Fourier multiplier ``eta``
    (i.i.d. +-1 by default, standard normal with ``gaussian_eta``), so it
    is unitary in the +-1 case.  Selecting ``m`` of its ``n`` rows and
    scaling by ``sqrt(n/m)`` gives ``E||Phi x||^2 = ||x||^2`` over eta
    draws; for m = n and +-1 multipliers the operator is exactly unitary.

    ``omega`` is either an explicit index set of size m or an integer seed
    from which the rows are drawn uniformly without replacement.
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    rng = _rng(seed_eta)
    if gaussian_eta:
        eta = rng.standard_normal(n).astype(complex)
    else:
        eta = rng.choice([-1.0, 1.0], size=n).astype(complex)
    idx = _resolve_omega(m, n, omega)
    scale = math.sqrt(n / m)

    def apply(x):
        y = np.fft.ifft(eta * np.fft.fft(np.asarray(x, dtype=complex)))
        return scale * y[idx]

    def adjoint(w):
        y = np.zeros(n, dtype=complex)
        y[idx] = scale * np.asarray(w, dtype=complex)
        return np.fft.ifft(np.conj(eta) * np.fft.fft(y))

    return LinearOperator(
        rows=m, cols=n, apply=apply, adjoint=adjoint,
        descriptor={"ensemble": "partial_circulant_demodulator", "m": m,
                    "n": n, "seed_eta": seed_eta,
                    "omega": [int(k) for k in idx],
                    "eta_law": "gaussian" if gaussian_eta else "rademacher",
                    "rng": "pcg64"},
    )


def universal_random_demodulator(m: int, n: int, seed_eta: int, seed_xi: int,
                                 omega) -> LinearOperator:
    """Partial circulant demodulator composed with a random sign flip.

    Apply cost is O(n log n): one sign multiply plus two FFTs.
    """
    circ = partial_circulant_demodulator(m, n, seed_eta, omega)
    signs = sign_diagonal(n, seed_xi)
    return LinearOperator(
        rows=m, cols=n,
        apply=lambda x: circ.apply(signs.apply(x)),
        adjoint=lambda w: signs.adjoint(circ.adjoint(w)),
        descriptor={"ensemble": "universal_random_demodulator", "m": m,
                    "n": n, "seed_eta": seed_eta, "seed_xi": seed_xi,
                    "omega": circ.descriptor["omega"], "rng": "pcg64"},
    )


def operator_from_descriptor(desc: dict) -> LinearOperator:
    """Rebuild an operator from its descriptor (seed determinism hook)."""
    kind = desc["ensemble"]
    if kind == "identity":
        return identity_operator(desc["n"])
    if kind == "gaussian":
        return gaussian_operator(desc["m"], desc["n"], desc["seed"])
    if kind == "sign_diagonal":
        return sign_diagonal(desc["n"], desc["seed"])
    if kind == "partial_circulant_demodulator":
        return partial_circulant_demodulator(
            desc["m"], desc["n"], desc["seed_eta"], desc["omega"],
            gaussian_eta=desc.get("eta_law") == "gaussian")
    if kind == "universal_random_demodulator":
        return universal_random_demodulator(
            desc["m"], desc["n"], desc["seed_eta"], desc["seed_xi"],
            desc["omega"])
    raise ValueError(f"unknown ensemble {kind!r}")


def weyl_heisenberg(j1: int, j2: int, n: int) -> LinearOperator:
    """Time-frequency shift ``Psi_j`` on C^n (unitary).

    ``(Psi_j y)_k = exp(2j*pi*j1*(k-j2)/n) * y_{(k-j2) mod n}``; the pair
    ``j = (0, j2)`` is the plain cyclic shift by ``j2``, so a channel
    spreading profile supported on ``j1 = 0`` acts by circular convolution.
    Indices are reduced mod n.
    """
    j1 %= n
    j2 %= n
    k = np.arange(n)
    phase = np.exp(2j * np.pi * j1 * ((k - j2) % n) / n)

    def apply(y):
        return phase * np.roll(np.asarray(y, dtype=complex), j2)

    def adjoint(w):
        return np.roll(np.conj(phase) * np.asarray(w, dtype=complex), -j2)

    return LinearOperator(
        rows=n, cols=n, apply=apply, adjoint=adjoint,
        descriptor={"ensemble": "weyl_heisenberg", "j1": j1, "j2": j2, "n": n},
    )


def spreading_channel(x: SparseVector, y: np.ndarray) -> np.ndarray:
    """Apply the spreading channel ``sum_j x_j Psi_j`` to the data y.

    ``x`` lives on the n^2 time-frequency grid with flat index
    ``j = j1*n + j2``.
    """
    y = np.asarray(y, dtype=complex)
    n = y.size
    if x.n != n * n:
        raise ValueError("spreading profile must live on the n^2 grid")
    out = np.zeros(n, dtype=complex)
    for j, v in zip(x.support, x.values):
        j1, j2 = divmod(j, n)
        out += v * weyl_heisenberg(j1, j2, n).apply(y)
    return out


@dataclass
class BilinearMap:
    """Bilinear map C^{n1} x C^{n2} -> C^n with its rank-one lifting."""

    n1: int
    n2: int
    n: int
    pair_apply: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "bilinear"

    def apply_pair(self, x, y) -> np.ndarray:
        return self.pair_apply(np.asarray(x, dtype=complex),
                               np.asarray(y, dtype=complex))

    def apply_matrix(self, m) -> np.ndarray:
        """Lifted action on an n1 x n2 matrix via linearity in each slot."""
        m = np.asarray(m, dtype=complex)
        if m.shape != (self.n1, self.n2):
            raise ValueError("matrix shape mismatch")
        out = np.zeros(self.n, dtype=complex)
        basis = np.eye(self.n2, dtype=complex)
        for j in range(self.n2):
            col = m[:, j]
            if np.any(col):
                out += self.pair_apply(col, basis[j])
        return out

    def apply_vec(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        return self.apply_matrix(u.reshape(self.n1, self.n2))


def rank_one_pack(x, y) -> np.ndarray:
    """vec(x (outer) y) in C-order: index i*n2 + j holds x_i * y_j."""
    return np.outer(np.asarray(x, dtype=complex),
                    np.asarray(y, dtype=complex)).ravel()


def rank_one_unpack(u, n1: int, n2: int) -> np.ndarray:
    return np.asarray(u, dtype=complex).reshape(n1, n2)


def convolution_lift(n: int, zero_padded: bool = False) -> BilinearMap:
    """Convolution as a bilinear map on C^n x C^n.

    Circular by default (output dimension n); with ``zero_padded`` the
    output lives in C^{2n-1} and circular equals ordinary convolution.
    """
    if zero_padded:
        n_out = 2 * n - 1

        def pair(x, y):
            return np.fft.ifft(np.fft.fft(x, n_out) * np.fft.fft(y, n_out))

        return BilinearMap(n, n, n_out, pair, name="conv_lift_zero_padded")

    def pair(x, y):
        return np.fft.ifft(np.fft.fft(x) * np.fft.fft(y))

    return BilinearMap(n, n, n, pair, name="conv_lift_circular")


def lifted_operator(b: BilinearMap) -> LinearOperator:
    """The lifting of ``b`` as a dense n x (n1*n2) linear operator."""
    mat = np.stack(
        [b.apply_vec(col) for col in np.eye(b.n1 * b.n2, dtype=complex)],
        axis=1)
    return LinearOperator(
        rows=b.n, cols=b.n1 * b.n2,
        apply=lambda u: mat @ np.asarray(u, dtype=complex),
        adjoint=lambda w: mat.conj().T @ np.asarray(w, dtype=complex),
        descriptor={"ensemble": "lifted_bilinear", "name": b.name,
                    "n1": b.n1, "n2": b.n2, "n": b.n},
    )


def compose(a: LinearOperator, b: LinearOperator) -> LinearOperator:
    """Composition a o b as a LinearOperator."""
    if a.cols != b.rows:
        raise ValueError("inner dimensions do not match")
    return LinearOperator(
        rows=a.rows, cols=b.cols,
        apply=lambda x: a.apply(b.apply(x)),
        adjoint=lambda w: b.adjoint(a.adjoint(w)),
        descriptor={"ensemble": "composition",
                    "outer": a.descriptor, "inner": b.descriptor},
    )
