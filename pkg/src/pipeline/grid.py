"""Uniform periodic grids, wave fields and the observables read off them."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy import fft

from src.config import GRID_POINTS, GRID_EXTENT, FFT_WORKERS


class PacketFitError(ValueError):
    """A packet does not fit inside the grid with the required margin."""


@dataclass(frozen=True)
class Grid1D:
    """Periodic grid x_j = x_min + jΔx, j = 0..n−1."""

    n_points: int = GRID_POINTS
    x_min: float = -GRID_EXTENT
    x_max: float = GRID_EXTENT

    def __post_init__(self):
        n = self.n_points
        if n < 64 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 64, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError(f"x_max must exceed x_min, got [{self.x_min}, {self.x_max}]")

    @classmethod
    def symmetric(cls, n_points: int = GRID_POINTS, extent: float = GRID_EXTENT) -> "Grid1D":
        return cls(n_points=n_points, x_min=-extent, x_max=extent)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def shape(self) -> Tuple[int]:
        return (self.n_points,)

    @property
    def ndim(self) -> int:
        return 1

    @property
    def cell(self) -> float:
        return self.dx

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @cached_property
    def k(self) -> np.ndarray:
        """Wavenumbers in discrete-Fourier ordering, |k| ≤ π/Δx."""
        return 2.0 * np.pi * fft.fftfreq(self.n_points, d=self.dx)

    def coordinate(self, axis: int = 0) -> np.ndarray:
        if axis != 0:
            raise ValueError("Grid1D has a single axis")
        return self.x

    def wavenumber(self, axis: int = 0) -> np.ndarray:
        if axis != 0:
            raise ValueError("Grid1D has a single axis")
        return self.k

    def k_squared(self) -> np.ndarray:
        return self.k**2

    def refined(self) -> "Grid1D":
        """Same extent, half the spacing."""
        return Grid1D(self.n_points * 2, self.x_min, self.x_max)

    def extents(self) -> Dict[str, float]:
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points}


@dataclass(frozen=True)
class Grid2D:
    """Outer product of two 1D grids, arrays indexed [i0, i1].

    Used both for (x, ς) single-particle runs and for (x1, x2) two-particle
    runs; in the latter case both axes share one grid.
    """

    axis0: Grid1D
    axis1: Grid1D

    @classmethod
    def square(cls, grid: Grid1D) -> "Grid2D":
        return cls(grid, grid)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.axis0.n_points, self.axis1.n_points)

    @property
    def ndim(self) -> int:
        return 2

    @property
    def cell(self) -> float:
        return self.axis0.dx * self.axis1.dx

    @property
    def is_square(self) -> bool:
        return self.axis0 == self.axis1

    def coordinate(self, axis: int = 0) -> np.ndarray:
        """Coordinate along ``axis`` broadcast against the other one."""
        if axis == 0:
            return self.axis0.x[:, None]
        return self.axis1.x[None, :]

    def wavenumber(self, axis: int = 0) -> np.ndarray:
        if axis == 0:
            return self.axis0.k[:, None]
        return self.axis1.k[None, :]

    def k_squared(self) -> np.ndarray:
        return self.axis0.k[:, None] ** 2 + self.axis1.k[None, :] ** 2

    def extents(self) -> Dict[str, float]:
        return {
            "axis0_min": self.axis0.x_min, "axis0_max": self.axis0.x_max, "axis0_points": self.axis0.n_points,
            "axis1_min": self.axis1.x_min, "axis1_max": self.axis1.x_max, "axis1_points": self.axis1.n_points,
        }


Grid = Union[Grid1D, Grid2D]


@dataclass
class WaveField:
    """Complex amplitudes on a grid, normalised so Σ|ψ|²·cell = 1."""

    grid: Grid
    amplitudes: np.ndarray
    norm_tracking: Optional[float] = field(default=None)

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != self.grid.shape:
            raise ValueError(f"amplitude shape {self.amplitudes.shape} does not match grid {self.grid.shape}")

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        value = float(np.sum(self.density()) * self.grid.cell)
        self.norm_tracking = value
        return value

    def normalized(self) -> "WaveField":
        total = self.norm()
        if total <= 0:
            raise ValueError("cannot normalise a zero field")
        return WaveField(self.grid, self.amplitudes / np.sqrt(total), norm_tracking=1.0)

    def copy(self) -> "WaveField":
        return WaveField(self.grid, self.amplitudes.copy(), self.norm_tracking)


def transform(psi: np.ndarray) -> np.ndarray:
    """Unitary (orthonormal) discrete Fourier transform over all axes."""
    return fft.fftn(psi, norm="ortho", workers=FFT_WORKERS)


def inverse_transform(phi: np.ndarray) -> np.ndarray:
    return fft.ifftn(phi, norm="ortho", workers=FFT_WORKERS)


def apply_momentum(psi: np.ndarray, grid: Grid, hbar: float, axis: int = 0) -> np.ndarray:
    """p̃ψ = −iħ̃ ∂ψ/∂x along ``axis``, spectrally."""
    phi = fft.fft(psi, axis=axis, workers=FFT_WORKERS)
    k = grid.wavenumber(axis)
    return hbar * fft.ifft(k * phi, axis=axis, workers=FFT_WORKERS)


def overlap(a: WaveField, b: WaveField) -> complex:
    """⟨a|b⟩."""
    return complex(np.sum(np.conj(a.amplitudes) * b.amplitudes) * a.grid.cell)


def moments(field: WaveField) -> Tuple[float, float]:
    """Centroid and standard deviation of a 1D field."""
    x = field.grid.x
    rho = field.density() * field.grid.cell
    total = rho.sum()
    mean = float(np.sum(x * rho) / total)
    var = float(np.sum((x - mean) ** 2 * rho) / total)
    return mean, float(np.sqrt(var))


def tail_mass(field: WaveField, cells: int = 2) -> float:
    """Probability in the outermost ``cells`` cells at every edge."""
    rho = field.density()
    mask = np.zeros(rho.shape, dtype=bool)
    for axis in range(rho.ndim):
        index = [slice(None)] * rho.ndim
        index[axis] = np.r_[0:cells, rho.shape[axis] - cells:rho.shape[axis]]
        mask[tuple(index)] = True
    return float(np.sum(rho[mask]) * field.grid.cell)


def momentum_density(field: WaveField, axis: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Probability per wavenumber bin along ``axis`` (other axes summed)."""
    phi = fft.fft(field.amplitudes, axis=axis, norm="ortho", workers=FFT_WORKERS)
    rho = np.abs(phi) ** 2 * field.grid.cell
    grid_axis = field.grid if field.grid.ndim == 1 else (field.grid.axis0 if axis == 0 else field.grid.axis1)
    other = tuple(a for a in range(rho.ndim) if a != axis)
    spectrum = rho.sum(axis=other) if other else rho
    return grid_axis.k, spectrum


def gaussian_packet(
    grid: Grid1D,
    center: float,
    omega: float,
    hbar: float,
    momentum: float = 0.0,
) -> WaveField:
    """N·exp[−(ω̃/2ħ̃)(x − center)²]·exp(i p̃ x/ħ̃), ground-state width √(ħ̃/2ω̃)."""
    sigma = np.sqrt(hbar / (2.0 * omega))
    _check_fit(grid, center, sigma)
    x = grid.x
    psi = np.exp(-(omega / (2.0 * hbar)) * (x - center) ** 2 + 1j * momentum * x / hbar)
    return WaveField(grid, psi).normalized()


def gaussian_packet_2d(
    grid: Grid2D,
    x_center: float,
    z_center: float,
    omega: float,
    hbar: float,
    sigma_z: float,
    p_z: float = 0.0,
) -> WaveField:
    """Transverse ground-state profile times a longitudinal Gaussian with momentum p̃_z."""
    sigma_x = np.sqrt(hbar / (2.0 * omega))
    _check_fit(grid.axis0, x_center, sigma_x)
    _check_fit(grid.axis1, z_center, sigma_z)
    x = grid.axis0.x[:, None]
    z = grid.axis1.x[None, :]
    psi = np.exp(
        -(omega / (2.0 * hbar)) * (x - x_center) ** 2
        - (z - z_center) ** 2 / (4.0 * sigma_z**2)
        + 1j * p_z * z / hbar
    )
    return WaveField(grid, psi).normalized()


def _check_fit(grid: Grid1D, center: float, sigma: float, margin: float = 6.0):
    if center - margin * sigma < grid.x_min or center + margin * sigma > grid.x_max:
        raise PacketFitError(
            f"packet at {center:g} with σ={sigma:.4g} needs {margin:g}σ clearance "
            f"inside [{grid.x_min:g}, {grid.x_max:g}]"
        )


def probability_left_right(field: WaveField) -> Dict[str, float]:
    """Valley probabilities; the x=0 grid line belongs to the right valley."""
    if field.grid.ndim != 1:
        raise ValueError("probability_left_right expects a 1D field")
    return _split_axis0(field)


def channel_probabilities(field: WaveField) -> Dict[str, float]:
    """Valley probabilities of an (x, ς) field, integrated over ς."""
    return _split_axis0(field)


def _split_axis0(field: WaveField) -> Dict[str, float]:
    rho = field.density()
    x = field.grid.coordinate(0)
    left_mask = np.broadcast_to(x < 0, rho.shape)
    p_left = float(np.sum(rho[left_mask]) * field.grid.cell)
    p_right = float(np.sum(rho[~left_mask]) * field.grid.cell)
    return {"P_left": p_left, "P_right": p_right, "total": p_left + p_right}


def quadrant_probabilities(field: WaveField) -> Dict[str, float]:
    """Mass with both particles in one valley versus one in each."""
    if field.grid.ndim != 2:
        raise ValueError("quadrant_probabilities expects a two-particle field")
    rho = field.density()
    right1 = field.grid.coordinate(0) >= 0
    right2 = field.grid.coordinate(1) >= 0
    same = np.equal(right1, right2)
    p_same = float(np.sum(rho[same]) * field.grid.cell)
    p_diff = float(np.sum(rho[~same]) * field.grid.cell)
    return {"P_same": p_same, "P_diff": p_diff, "total": p_same + p_diff}


def exchange_defect(field: WaveField, sign: int) -> float:
    """max|ψ(x1,x2) − sign·ψ(x2,x1)| on a square two-particle grid."""
    psi = field.amplitudes
    return float(np.max(np.abs(psi - sign * psi.T)))
