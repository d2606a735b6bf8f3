"""Unit scaling between physical and dimensionless variables.

This is the only place physical units appear. Everything downstream works
in scaled variables x̃ = x/ξ, z̃ = z/ξ, t̃ = t/τ, p̃ = τp/(mξ), where the
Schrödinger equation carries the effective Planck constant ħ̃ = ħτ/(mξ²).
"""

from dataclasses import dataclass
from typing import Dict

import numpy as np
from scipy import constants

from src.pipeline.grid import WaveField, apply_momentum, moments


HBAR = constants.hbar  # 1.054571817e-34 J s (CODATA 2018)
RB87_MASS = 86.909180531 * constants.atomic_mass  # ~1.443e-25 kg
ELECTRON_MASS = constants.m_e


@dataclass(frozen=True)
class ScaledUnits:
    """The (ξ, τ, m) scaling triple."""

    length_scale: float  # meters
    time_scale: float  # seconds
    mass: float  # kilograms

    def __post_init__(self):
        for name in ("length_scale", "time_scale", "mass"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive and finite, got {value}")

    @property
    def hbar_eff(self) -> float:
        return hbar_eff(self)


# Parameter sets discussed for atomic and electronic realisations
RUBIDIUM_87 = ScaledUnits(length_scale=100e-9, time_scale=80e-6, mass=RB87_MASS)
ELECTRON = ScaledUnits(length_scale=40e-9, time_scale=6e-12, mass=ELECTRON_MASS)

PRESETS = {"rb87": RUBIDIUM_87, "electron": ELECTRON}


def hbar_eff(units: ScaledUnits) -> float:
    """Effective dimensionless Planck constant ħτ/(mξ²)."""
    return HBAR * units.time_scale / (units.mass * units.length_scale**2)


def scale(physical: Dict[str, float], units: ScaledUnits) -> Dict[str, float]:
    """Convert physical {x, z, t, p} (SI) to scaled variables.

    Only the keys present in ``physical`` are converted.
    """
    factors = _factors(units)
    return {key: value / factors[key] for key, value in physical.items()}


def unscale(scaled: Dict[str, float], units: ScaledUnits) -> Dict[str, float]:
    """Inverse of :func:`scale`."""
    factors = _factors(units)
    return {key: value * factors[key] for key, value in scaled.items()}


def _factors(units: ScaledUnits) -> Dict[str, float]:
    xi, tau, m = units.length_scale, units.time_scale, units.mass
    return {"x": xi, "z": xi, "t": tau, "p": m * xi / tau}


def velocity_from_momentum(p_scaled: float, units: ScaledUnits) -> float:
    """Velocity in m/s of a particle with scaled momentum p̃."""
    return p_scaled * units.length_scale / units.time_scale


def energy_scale(units: ScaledUnits) -> float:
    """Joules per unit of scaled energy, mξ²/τ²."""
    return units.mass * units.length_scale**2 / units.time_scale**2


def conversion_table(units: ScaledUnits, omega: float = 30.0, p_z: float = 30.0) -> Dict[str, float]:
    """Physical values behind the scaled parameters of a run."""
    e_unit = energy_scale(units)
    return {
        "length_scale_m": units.length_scale,
        "time_scale_s": units.time_scale,
        "mass_kg": units.mass,
        "hbar_eff": hbar_eff(units),
        "momentum_unit_kg_m_per_s": units.mass * units.length_scale / units.time_scale,
        "energy_unit_J": e_unit,
        "energy_unit_K": e_unit / constants.k,
        "energy_unit_eV": e_unit / constants.e,
        "omega_rad_per_s": omega / units.time_scale,
        "beam_velocity_m_per_s": velocity_from_momentum(p_z, units),
        "beam_energy_eV": 0.5 * units.mass * velocity_from_momentum(p_z, units) ** 2 / constants.e,
    }


def commutator_expectation(field: WaveField, hbar: float, axis: int = 0) -> complex:
    """⟨ψ|x̃p̃ − p̃x̃|ψ⟩ on the grid; equals iħ̃ for a well-resolved state."""
    x = field.grid.coordinate(axis)
    psi = field.amplitudes
    xp = x * apply_momentum(psi, field.grid, hbar, axis)
    px = apply_momentum(x * psi, field.grid, hbar, axis)
    return complex(np.sum(np.conj(psi) * (xp - px)) * field.grid.cell)


def uncertainty_product(field: WaveField, hbar: float) -> float:
    """Δx̃·Δp̃ of a 1D field."""
    _, dx = moments(field)
    psi = field.amplitudes
    cell = field.grid.cell
    p_psi = apply_momentum(psi, field.grid, hbar)
    p_mean = np.real(np.sum(np.conj(psi) * p_psi) * cell)
    p2 = np.real(np.sum(np.abs(p_psi) ** 2) * cell)
    return float(dx * np.sqrt(max(p2 - p_mean**2, 0.0)))
