"""Time-averaged wave-packet state of a flavor neutrino.

The state born as flavor alpha is, at distance x,

    rho_alpha(x) = sum_{beta,gamma} F[beta, gamma] |beta><gamma|

with the flavor kernel

    F[beta, gamma] = sum_{j,k} conj(U[alpha,j]) U[alpha,k] f_jk(x) U[beta,j] conj(U[gamma,k])

and f_jk(x) = exp(-i phi_jk - d_jk^2), phi_jk the oscillation phase and d_jk
the wave-packet separation in units of the coherence length.

Three-qubit encoding: |q_e q_mu q_tau>, basis index 4*q_e + 2*q_mu + q_tau,
so nu_e -> |100> (4), nu_mu -> |010> (2), nu_tau -> |001> (1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import FLAVORS, HBAR_C_EV_M, OscillationParams, flavor_index

QUBIT_INDEX = (4, 2, 1)  # basis index of nu_e, nu_mu, nu_tau


@dataclass(frozen=True)
class FlavorKernel:
    source_flavor: str
    distance: float
    entries: np.ndarray

    def __getitem__(self, key):
        b, g = key
        return self.entries[flavor_index(b), flavor_index(g)]

    def probabilities(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()


def _distances(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise ValueError("distances must be finite and non-negative")
    return x


def decoherence_matrix(x, params: OscillationParams) -> np.ndarray:
    """All nine factors f_jk(x); shape ``x.shape + (3, 3)``, 0-based mass indices."""
    x = _distances(x)
    dm2 = params.dm2_matrix()
    xs = x[..., None, None]
    phase = dm2 * xs / (2.0 * params.energy * HBAR_C_EV_M)
    damp = dm2 * xs / (4.0 * math.sqrt(2.0) * params.energy**2 * params.sigma_x)
    return np.exp(-1j * phase - damp**2)


def decoherence_factor(j: int, k: int, x, params: OscillationParams):
    """Decoherence factor f_jk(x) for 1-based mass indices ``j``, ``k``."""
    if j not in (1, 2, 3) or k not in (1, 2, 3):
        raise ValueError(f"mass indices must be in {{1, 2, 3}}, got ({j}, {k})")
    f = decoherence_matrix(x, params)[..., j - 1, k - 1]
    return f[()] if np.ndim(f) == 0 else f


def _kernel_from_factors(alpha: int, f: np.ndarray, U: np.ndarray) -> np.ndarray:
    # a[j, b] = conj(U_aj) U_bj,  c[k, g] = U_ak conj(U_gk)
    a = U[alpha].conj()[:, None] * U.T
    c = U[alpha][:, None] * U.T.conj()
    return np.einsum("jb,...jk,kg->...bg", a, f, c)


def flavor_kernels(alpha, x, params: OscillationParams) -> np.ndarray:
    """Flavor kernels on a grid of distances; shape ``x.shape + (3, 3)``."""
    a = flavor_index(alpha)
    return _kernel_from_factors(a, decoherence_matrix(x, params), params.pmns())


def flavor_kernel(alpha, x: float, params: OscillationParams) -> FlavorKernel:
    """Flavor kernel F^(alpha)(x) at a single distance."""
    x = float(_distances(x))
    return FlavorKernel(FLAVORS[flavor_index(alpha)], x, flavor_kernels(alpha, x, params))


def asymptotic_kernel(alpha, params: OscillationParams) -> FlavorKernel:
    """Large-distance limit of the kernel, where f_jk -> delta_jk.

    F[beta, gamma] = sum_j |U_alpha j|^2 U_beta j conj(U_gamma j).
    """
    a = flavor_index(alpha)
    U = params.pmns()
    w = np.abs(U[a]) ** 2
    entries = np.einsum("j,bj,gj->bg", w, U, U.conj())
    return FlavorKernel(FLAVORS[a], math.inf, entries)


def embed_kernel(kernel) -> np.ndarray:
    """Place a 3x3 flavor kernel (or a stack of them) into the 8x8 qubit space."""
    k = kernel.entries if isinstance(kernel, FlavorKernel) else np.asarray(kernel)
    rho = np.zeros(k.shape[:-2] + (8, 8), dtype=complex)
    idx = np.array(QUBIT_INDEX)
    rho[..., idx[:, None], idx[None, :]] = k
    return rho


def density_matrix(alpha, x, params: OscillationParams) -> np.ndarray:
    """Three-qubit density matrix rho_alpha(x); shape ``x.shape + (8, 8)``."""
    return embed_kernel(flavor_kernels(alpha, x, params))


def transition_probability(alpha, eta, x, params: OscillationParams):
    """P(nu_alpha -> nu_eta) at distance ``x`` (scalar or array)."""
    e = flavor_index(eta)
    p = flavor_kernels(alpha, x, params)[..., e, e].real
    return float(p) if np.ndim(p) == 0 else p


def asymptotic_probability(alpha, eta, params: OscillationParams) -> float:
    """sum_j |U_alpha j|^2 |U_eta j|^2."""
    U2 = np.abs(params.pmns()) ** 2
    return float(U2[flavor_index(alpha)] @ U2[flavor_index(eta)])
