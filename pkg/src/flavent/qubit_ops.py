"""Small-system qubit linear algebra: partial trace, partial transpose,
spin flip and trace norm.

Matrices may carry leading batch dimensions; the last two axes are the
operator. Qubit 0 is the most significant bit of the basis index. For the
flavor register qubits are labelled by flavor ('e' = 0, 'mu' = 1, 'tau' = 2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .params import flavor_index

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

HERMITIAN_TOL = 1e-10


def _n_qubits(rho: np.ndarray) -> int:
    d = rho.shape[-1]
    if rho.ndim < 2 or rho.shape[-2] != d:
        raise ValueError(f"expected square matrices, got shape {rho.shape}")
    n = d.bit_length() - 1
    if d != 1 << n or n == 0:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def _qubits(labels, n: int) -> list[int]:
    if isinstance(labels, (str, int, np.integer)):
        labels = [labels]
    out = sorted({flavor_index(q) if isinstance(q, str) else int(q) for q in labels})
    if any(q < 0 or q >= n for q in out):
        raise ValueError(f"qubit labels {labels!r} out of range for {n} qubits")
    return out


@dataclass(frozen=True)
class Bipartition:
    """Split of the qubits into two non-empty complementary sides."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __post_init__(self):
        a, b = set(self.side_a), set(self.side_b)
        if not a or not b:
            raise ValueError("both sides of a bipartition must be non-empty")
        if a & b:
            raise ValueError(f"sides overlap: {sorted(a & b)}")

    @classmethod
    def of(cls, side_a: Iterable, side_b: Iterable, n_qubits: int = 3) -> "Bipartition":
        a = tuple(_qubits(list(side_a), n_qubits))
        b = tuple(_qubits(list(side_b), n_qubits))
        part = cls(a, b)
        if set(a) | set(b) != set(range(n_qubits)):
            raise ValueError(f"bipartition {a} | {b} does not cover all {n_qubits} qubits")
        return part

    @classmethod
    def two_one(cls, pair: Iterable, single) -> "Bipartition":
        """The 2:1 split (beta, gamma ; eta) of the flavor register."""
        return cls.of(pair, [single], 3)


def partial_trace(rho, traced) -> np.ndarray:
    """Trace out the qubit(s) ``traced``; kept qubits retain their order."""
    rho = np.asarray(rho)
    n = _n_qubits(rho)
    gone = _qubits(traced, n)
    keep = [q for q in range(n) if q not in gone]
    if not keep:
        raise ValueError("cannot trace out every qubit")
    batch = rho.shape[:-2]
    t = rho.reshape(batch + (2,) * (2 * n))
    nb = len(batch)
    # move traced row/col axes to the end, then take the diagonal sum
    rows = [nb + q for q in keep] + [nb + q for q in gone]
    cols = [nb + n + q for q in keep] + [nb + n + q for q in gone]
    t = np.transpose(t, list(range(nb)) + rows + cols)
    dk, dg = 1 << len(keep), 1 << len(gone)
    t = t.reshape(batch + (dk, dg, dk, dg))
    return np.einsum("...iaja->...ij", t)


def partial_transpose(rho, transposed) -> np.ndarray:
    """Transpose the row/column indices of the qubit(s) ``transposed``.

    ``transposed`` may be a label, an iterable of labels, or a
    :class:`Bipartition` (its ``side_b`` is transposed).
    """
    rho = np.asarray(rho)
    n = _n_qubits(rho)
    if isinstance(transposed, Bipartition):
        if set(transposed.side_a) | set(transposed.side_b) != set(range(n)):
            raise ValueError("bipartition does not match the number of qubits")
        transposed = transposed.side_b
    qs = _qubits(transposed, n)
    batch = rho.shape[:-2]
    nb = len(batch)
    t = rho.reshape(batch + (2,) * (2 * n))
    perm = list(range(nb + 2 * n))
    for q in qs:
        perm[nb + q], perm[nb + n + q] = perm[nb + n + q], perm[nb + q]
    return np.transpose(t, perm).reshape(rho.shape)


def spin_flip(rho) -> np.ndarray:
    """(sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y) in the standard basis."""
    rho = np.asarray(rho)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"spin flip needs 4x4 matrices, got {rho.shape}")
    return SIGMA_YY @ rho.conj() @ SIGMA_YY


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0))


def trace_norm(m, tol: float = HERMITIAN_TOL):
    """Sum of absolute eigenvalues of a Hermitian matrix (or stack)."""
    m = np.asarray(m)
    err = hermiticity_error(m)
    if err > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")
    s = np.abs(np.linalg.eigvalsh(m)).sum(axis=-1)
    return float(s) if np.ndim(s) == 0 else s


def check_state(rho, tol: float = HERMITIAN_TOL, psd_tol: float = 1e-10) -> None:
    """Raise ValueError unless ``rho`` is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    _n_qubits(rho)
    err = hermiticity_error(rho)
    if err > tol:
        raise ValueError(f"state is not Hermitian (max deviation {err:.3g})")
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.max(np.abs(tr - 1.0)) > tol:
        raise ValueError("state does not have unit trace")
    if np.min(np.linalg.eigvalsh(rho)) < -psd_tol:
        raise ValueError("state is not positive semidefinite")
