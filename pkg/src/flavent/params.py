"""Physical constants, oscillation parameter sets and the PMNS matrix.

Units: squared-mass differences in eV^2, energies in eV, distances in meters.
Phases are made dimensionless with hbar*c.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Mapping

import numpy as np

HBAR_C_EV_M = 1.973269804e-7  # eV * m
GEV = 1.0e9  # eV

FLAVORS = ("e", "mu", "tau")
_FLAVOR_ALIASES = {
    "e": 0, "nue": 0, "nu_e": 0,
    "mu": 1, "μ": 1, "m": 1, "numu": 1, "nu_mu": 1,
    "tau": 2, "τ": 2, "t": 2, "nutau": 2, "nu_tau": 2,
}


def flavor_index(flavor) -> int:
    """Map a flavor label ('e', 'mu', 'tau', 'μ', 'τ') or index 0..2 to its index."""
    if isinstance(flavor, (int, np.integer)) and not isinstance(flavor, bool):
        if 0 <= flavor < 3:
            return int(flavor)
        raise ValueError(f"flavor index out of range: {flavor}")
    if isinstance(flavor, str):
        key = flavor.strip().lower()
        if key in _FLAVOR_ALIASES:
            return _FLAVOR_ALIASES[key]
    raise ValueError(f"unknown flavor: {flavor!r}")


def flavor_name(flavor) -> str:
    return FLAVORS[flavor_index(flavor)]


def _dec(value: float) -> Fraction:
    # shortest round-trip decimal, i.e. the number as it was written
    return Fraction(repr(float(value)))


@dataclass(frozen=True)
class MixingAngles:
    """Mixing angles stored as sin^2(theta_ij)."""

    sin2_theta12: float
    sin2_theta13: float
    sin2_theta23: float

    def __post_init__(self):
        for name in ("sin2_theta12", "sin2_theta13", "sin2_theta23"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating)) and 0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")

    def radians(self) -> tuple[float, float, float]:
        """First-quadrant angles (theta12, theta13, theta23)."""
        return tuple(
            math.asin(math.sqrt(s))
            for s in (self.sin2_theta12, self.sin2_theta13, self.sin2_theta23)
        )


@dataclass(frozen=True)
class OscillationParams:
    """Full physical configuration of the three-flavor wave-packet model.

    ``dm2_jk = m_j^2 - m_k^2``. The closure ``dm2_31 - dm2_32 == dm2_21`` is
    checked on construction in exact decimal arithmetic; use
    :meth:`from_splittings` to build a consistent set from the solar and
    atmospheric splittings.
    """

    angles: MixingAngles
    delta_cp: float
    dm2_21: float
    dm2_31: float
    dm2_32: float
    energy: float
    sigma_p: float

    def __post_init__(self):
        if not self.energy > 0:
            raise ValueError(f"energy must be positive, got {self.energy!r}")
        if not self.sigma_p > 0:
            raise ValueError(f"sigma_p must be positive, got {self.sigma_p!r}")
        for name in ("delta_cp", "dm2_21", "dm2_31", "dm2_32", "energy", "sigma_p"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if _dec(self.dm2_31) - _dec(self.dm2_32) != _dec(self.dm2_21):
            # digits beyond double precision cannot close exactly; allow rounding only
            slack = 4 * math.ulp(max(abs(self.dm2_31), abs(self.dm2_32), abs(self.dm2_21)))
            if abs(self.dm2_31 - self.dm2_32 - self.dm2_21) > slack:
                raise ValueError(
                    "squared-mass differences do not close: "
                    f"dm2_31 - dm2_32 = {self.dm2_31 - self.dm2_32!r} != dm2_21 = {self.dm2_21!r}"
                )

    @classmethod
    def from_splittings(
        cls,
        angles: MixingAngles,
        delta_cp: float,
        dm2_21: float,
        dm2_atm: float,
        energy: float,
        sigma_p: float,
    ) -> "OscillationParams":
        """Build from dm2_21 and the atmospheric splitting.

        ``dm2_31 = dm2_atm + dm2_21/2`` and ``dm2_32 = dm2_atm - dm2_21/2``,
        evaluated on the decimal values of the inputs.
        """
        half = _dec(dm2_21) / 2
        atm = _dec(dm2_atm)
        return cls(
            angles=angles,
            delta_cp=float(delta_cp),
            dm2_21=float(dm2_21),
            dm2_31=float(atm + half),
            dm2_32=float(atm - half),
            energy=float(energy),
            sigma_p=float(sigma_p),
        )

    @property
    def dm2_atm(self) -> float:
        return float((_dec(self.dm2_31) + _dec(self.dm2_32)) / 2)

    def dm2_matrix(self) -> np.ndarray:
        """Antisymmetric 3x3 array with entry [j-1, k-1] = dm2_jk."""
        d = np.zeros((3, 3))
        d[1, 0] = self.dm2_21
        d[2, 0] = self.dm2_31
        d[2, 1] = self.dm2_32
        return d - d.T

    def dm2(self, j: int, k: int) -> float:
        """Squared-mass difference m_j^2 - m_k^2 for 1-based mass indices."""
        if j not in (1, 2, 3) or k not in (1, 2, 3):
            raise ValueError(f"mass indices must be in {{1, 2, 3}}, got ({j}, {k})")
        return float(self.dm2_matrix()[j - 1, k - 1])

    @property
    def sigma_x(self) -> float:
        """Wave-packet width in meters, hbar*c / (2 sigma_p)."""
        return HBAR_C_EV_M / (2.0 * self.sigma_p)

    def pmns(self) -> np.ndarray:
        return build_pmns(self.angles, self.delta_cp)

    def replace(self, **changes) -> "OscillationParams":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, float]:
        """Serialise using the JSON config schema (GeV for energies)."""
        return {
            "sin2_theta12": self.angles.sin2_theta12,
            "sin2_theta13": self.angles.sin2_theta13,
            "sin2_theta23": self.angles.sin2_theta23,
            "delta_cp_rad": self.delta_cp,
            "dm2_21_ev2": self.dm2_21,
            "dm2_atm_ev2": self.dm2_atm,
            "energy_gev": float(_dec(self.energy) / _dec(GEV)),
            "sigma_p_gev": float(_dec(self.sigma_p) / _dec(GEV)),
        }


PARAM_KEYS = (
    "sin2_theta12",
    "sin2_theta13",
    "sin2_theta23",
    "delta_cp_rad",
    "dm2_21_ev2",
    "dm2_atm_ev2",
    "energy_gev",
    "sigma_p_gev",
)

DEFAULTS = {
    "sin2_theta12": 0.314,
    "sin2_theta13": 0.8e-2,
    "sin2_theta23": 0.45,
    "delta_cp_rad": 0.0,
    "dm2_21_ev2": 7.92e-5,
    "dm2_atm_ev2": 2.6e-3,
    "energy_gev": 10.0,
    "sigma_p_gev": 1.0,
}


def params_from_dict(doc: Mapping[str, Any] | None = None) -> OscillationParams:
    """Resolve a parameter document; missing keys take the default values.

    Keys outside the parameter schema are ignored so that a sweep config can
    be passed in whole.
    """
    values = dict(DEFAULTS)
    for key in PARAM_KEYS:
        if doc is not None and key in doc:
            value = doc[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"{key} must be a number, got {value!r}")
            values[key] = float(value)
    return OscillationParams.from_splittings(
        angles=MixingAngles(values["sin2_theta12"], values["sin2_theta13"], values["sin2_theta23"]),
        delta_cp=values["delta_cp_rad"],
        dm2_21=values["dm2_21_ev2"],
        dm2_atm=values["dm2_atm_ev2"],
        energy=float(_dec(values["energy_gev"]) * _dec(GEV)),
        sigma_p=float(_dec(values["sigma_p_gev"]) * _dec(GEV)),
    )


def default_params() -> OscillationParams:
    """Experimental parameter set used for all figure reproductions (delta = 0)."""
    return params_from_dict(None)


def build_pmns(angles: MixingAngles, delta_cp: float = 0.0) -> np.ndarray:
    """PMNS matrix in the standard (PDG) parameterisation.

    Rows are flavors (e, mu, tau), columns mass eigenstates (1, 2, 3).
    """
    if not isinstance(angles, MixingAngles):
        angles = MixingAngles(*angles)
    s12, s13, s23 = (math.sqrt(s) for s in (angles.sin2_theta12, angles.sin2_theta13, angles.sin2_theta23))
    c12, c13, c23 = (math.sqrt(1.0 - s) for s in (angles.sin2_theta12, angles.sin2_theta13, angles.sin2_theta23))
    ep = complex(math.cos(delta_cp), math.sin(delta_cp))
    em = ep.conjugate()
    return np.array(
        [
            [c12 * c13, s12 * c13, s13 * em],
            [-s12 * c23 - c12 * s23 * s13 * ep, c12 * c23 - s12 * s23 * s13 * ep, s23 * c13],
            [s12 * s23 - c12 * c23 * s13 * ep, -c12 * s23 - s12 * c23 * s13 * ep, c23 * c13],
        ],
        dtype=complex,
    )


def phase_argument(dm2, x, energy: float):
    """Dimensionless oscillation phase dm2 * x / (2 E hbar c).

    ``dm2`` in eV^2, ``x`` in meters (scalar or array), ``energy`` in eV.
    """
    if not energy > 0:
        raise ValueError(f"energy must be positive, got {energy!r}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("distance must be non-negative")
    out = np.asarray(dm2, dtype=float) * x / (2.0 * energy * HBAR_C_EV_M)
    return out[()] if out.ndim == 0 else out


def oscillation_length(dm2: float, energy: float) -> float:
    """Distance over which the phase for ``dm2`` advances by 2 pi (meters)."""
    return 4.0 * math.pi * energy * HBAR_C_EV_M / abs(dm2)


def coherence_length(dm2: float, params: OscillationParams) -> float:
    """Distance at which the Gaussian damping exponent for ``dm2`` reaches one (meters)."""
    return 4.0 * math.sqrt(2.0) * params.energy**2 * params.sigma_x / abs(dm2)
