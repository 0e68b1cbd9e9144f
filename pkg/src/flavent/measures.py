"""Entanglement measures for the three-flavor state.

Production values use the closed forms in terms of the flavor kernel F:

    C^(b,g)      = 2 |F[b, g]|
    E_N^(b,g;h)  = log2(1 + 2 sqrt(|F[b, h]|^2 + |F[g, h]|^2))

The general algorithms (Wootters concurrence on the reduced two-qubit state,
log-negativity from the partial transpose) work on arbitrary states and are
used to cross-check the closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .params import FLAVORS, OscillationParams, flavor_index
from .qubit_ops import Bipartition, check_state, partial_trace, partial_transpose, spin_flip, trace_norm
from .wavepacket import asymptotic_kernel, embed_kernel, flavor_kernels

PAIRS = ((0, 1), (0, 2), (1, 2))
# (beta, gamma ; eta): eta is the singleton side
BIPARTITIONS = ((0, 1, 2), (0, 2, 1), (1, 2, 0))

CROSS_CHECK_TOL = 1e-9
EIG_IMAG_TOL = 1e-10


class CrossValidationError(RuntimeError):
    """Closed-form and general-algorithm values disagree."""


def _pair(pair) -> tuple[int, int]:
    b, g = (flavor_index(f) for f in pair)
    if b == g:
        raise ValueError(f"pair needs two distinct flavors, got {pair!r}")
    return (b, g) if b < g else (g, b)


def _two_one(bipartition) -> tuple[int, int, int]:
    """Normalise a 2:1 split to (beta, gamma, eta) with beta < gamma.

    Accepts ``(beta, gamma, eta)``, ``((beta, gamma), eta)``, the string form
    ``"e,mu;tau"`` or a :class:`Bipartition` with a single qubit on side b.
    """
    if isinstance(bipartition, Bipartition):
        if len(bipartition.side_b) != 1 or len(bipartition.side_a) != 2:
            raise ValueError("expected a 2:1 bipartition with the singleton on side b")
        labels = (*bipartition.side_a, bipartition.side_b[0])
    elif isinstance(bipartition, str):
        try:
            pair, single = bipartition.split(";")
            labels = (*pair.split(","), single)
        except ValueError:
            raise ValueError(f"cannot parse bipartition {bipartition!r}") from None
    elif len(bipartition) == 2:
        labels = (*bipartition[0], bipartition[1])
    else:
        labels = tuple(bipartition)
    if len(labels) != 3:
        raise ValueError(f"bipartition must name three flavors, got {bipartition!r}")
    b, g, h = (flavor_index(f) for f in labels)
    if len({b, g, h}) != 3:
        raise ValueError(f"bipartition labels must be distinct, got {bipartition!r}")
    return (min(b, g), max(b, g), h)


# --- general algorithms ----------------------------------------------------

def concurrence_general(rho):
    """Wootters concurrence of a two-qubit state (or stack of states)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise ValueError(f"expected 4x4 two-qubit states, got {rho.shape}")
    check_state(rho)
    ev = np.linalg.eigvals(rho @ spin_flip(rho))
    if np.max(np.abs(ev.imag), initial=0.0) > EIG_IMAG_TOL:
        raise ValueError("rho * rho_tilde has complex eigenvalues beyond tolerance")
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)), axis=-1)[..., ::-1]
    c = np.maximum(0.0, lam[..., 0] - lam[..., 1:].sum(axis=-1))
    return float(c) if np.ndim(c) == 0 else c


def log_negativity_general(rho, bipartition):
    """log2 of the trace norm of rho partially transposed on the singleton side."""
    rho = np.asarray(rho, dtype=complex)
    _, _, h = _two_one(bipartition)
    check_state(rho)
    if rho.shape[-1] != 8:
        raise ValueError("2:1 bipartitions need a three-qubit state")
    ln = np.log2(trace_norm(partial_transpose(rho, [h])))
    return float(ln) if np.ndim(ln) == 0 else ln


def average_log_negativity(rho):
    """Mean log-negativity over the three 2:1 bipartitions of three qubits."""
    vals = [log_negativity_general(rho, bp) for bp in BIPARTITIONS]
    return sum(vals) / len(vals)


def general_measures(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Concurrences (PAIRS order) and log-negativities (BIPARTITIONS order)
    of three-qubit states via the general algorithms; trailing axis of size 3."""
    conc = np.stack(
        [concurrence_general(partial_trace(rho, [3 - b - g])) for b, g in PAIRS], axis=-1
    )
    ln = np.stack([log_negativity_general(rho, bp) for bp in BIPARTITIONS], axis=-1)
    return conc, ln


# --- closed forms ------------------------------------------------------------

def closed_measures(kernel: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Probabilities, concurrences and log-negativities from flavor kernels.

    Input shape ``(..., 3, 3)``; each output has a trailing axis of size 3
    (flavors, PAIRS and BIPARTITIONS order respectively).
    """
    k = np.asarray(kernel)
    probs = np.real(np.diagonal(k, axis1=-2, axis2=-1))
    mod = np.abs(k)
    conc = np.stack([2.0 * mod[..., b, g] for b, g in PAIRS], axis=-1)
    ln = np.stack(
        [
            np.log2(1.0 + 2.0 * np.sqrt(mod[..., b, h] ** 2 + mod[..., g, h] ** 2))
            for b, g, h in BIPARTITIONS
        ],
        axis=-1,
    )
    return probs, conc, ln


def concurrence_closed(alpha, pair, x, params: OscillationParams):
    b, g = _pair(pair)
    c = 2.0 * np.abs(flavor_kernels(alpha, x, params)[..., b, g])
    return float(c) if np.ndim(c) == 0 else c


def log_negativity_closed(alpha, bipartition, x, params: OscillationParams):
    b, g, h = _two_one(bipartition)
    k = flavor_kernels(alpha, x, params)
    ln = np.log2(1.0 + 2.0 * np.sqrt(np.abs(k[..., b, h]) ** 2 + np.abs(k[..., g, h]) ** 2))
    return float(ln) if np.ndim(ln) == 0 else ln


# --- reports -----------------------------------------------------------------

def pair_key(b: int, g: int) -> tuple[str, str]:
    return (FLAVORS[b], FLAVORS[g])


def bipartition_key(b: int, g: int, h: int) -> tuple[str, str, str]:
    return (FLAVORS[b], FLAVORS[g], FLAVORS[h])


@dataclass(frozen=True)
class EntanglementReport:
    distance: float
    probabilities: dict = field(default_factory=dict)
    concurrences: dict = field(default_factory=dict)
    log_negativities: dict = field(default_factory=dict)
    average_log_negativity: float = 0.0


def _cross_check(kernels: np.ndarray, conc: np.ndarray, ln: np.ndarray) -> None:
    g_conc, g_ln = general_measures(embed_kernel(kernels))
    worst = max(float(np.max(np.abs(g_conc - conc))), float(np.max(np.abs(g_ln - ln))))
    if not worst <= CROSS_CHECK_TOL:
        raise CrossValidationError(
            f"closed form and general algorithm differ by {worst:.3g} (> {CROSS_CHECK_TOL:g})"
        )


def _make_report(x: float, probs, conc, ln) -> EntanglementReport:
    return EntanglementReport(
        distance=x,
        probabilities={FLAVORS[i]: float(probs[i]) for i in range(3)},
        concurrences={pair_key(*p): float(conc[i]) for i, p in enumerate(PAIRS)},
        log_negativities={bipartition_key(*bp): float(ln[i]) for i, bp in enumerate(BIPARTITIONS)},
        average_log_negativity=float(ln.sum() / 3.0),
    )


def measure_grid(alpha, x, params: OscillationParams, cross_validate: bool = False):
    """Closed-form measures on a 1-d distance grid.

    Returns ``(probs, conc, ln, avg)`` with shapes ``(n, 3)`` x3 and ``(n,)``.
    Raises :class:`CrossValidationError` if ``cross_validate`` is set and the
    general algorithms disagree beyond 1e-9 anywhere.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kernels = flavor_kernels(alpha, x, params)
    probs, conc, ln = closed_measures(kernels)
    if cross_validate:
        _cross_check(kernels, conc, ln)
    return probs, conc, ln, ln.sum(axis=-1) / 3.0


def report(alpha, x: float, params: OscillationParams, cross_validate: bool = False) -> EntanglementReport:
    """All measures for source flavor ``alpha`` at distance ``x``."""
    probs, conc, ln, _ = measure_grid(alpha, [x], params, cross_validate)
    return _make_report(float(x), probs[0], conc[0], ln[0])


def asymptotic_report(alpha, params: OscillationParams) -> EntanglementReport:
    """Measures evaluated on the large-distance kernel."""
    probs, conc, ln = closed_measures(asymptotic_kernel(alpha, params).entries)
    return _make_report(math.inf, probs, conc, ln)


def find_nonmonotone_pair(survival, concurrences, p_tol: float = 1e-3, min_gap: float = 0.05):
    """Search for two grid points with matching survival probability but
    different concurrence.

    ``survival`` has shape ``(n,)`` and ``concurrences`` shape ``(n, m)``.
    Returns ``(i, j, column, gap)`` for the largest gap among pairs whose
    survival probabilities agree within ``p_tol``, or ``None`` if no gap
    exceeds ``min_gap``.
    """
    p = np.asarray(survival, dtype=float)
    c = np.asarray(concurrences, dtype=float).reshape(len(p), -1)
    close = np.abs(p[:, None] - p[None, :]) <= p_tol
    close &= np.triu(np.ones_like(close), k=1).astype(bool)
    best = None
    for col in range(c.shape[1]):
        gap = np.where(close, np.abs(c[:, None, col] - c[None, :, col]), -np.inf)
        i, j = np.unravel_index(np.argmax(gap), gap.shape)
        if gap[i, j] > min_gap and (best is None or gap[i, j] > best[3]):
            best = (int(i), int(j), col, float(gap[i, j]))
    return best
