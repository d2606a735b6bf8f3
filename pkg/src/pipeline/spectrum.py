"""Stationary states of the frozen double well.

The lowest symmetric/antisymmetric pair at minimum separation sets the
tunneling frequency Ω = (E_A − E_S)/(2ħ̃); the localized states built
from the pair define the two-particle Bell basis and the mean
interaction energy V̄ that drives the loss of bosonic bunching.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import sys

import numpy as np
from scipy.linalg import eigh_tridiagonal

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import BASE_HBAR, VERBOSE
from src.pipeline.grid import (
    Grid1D, Grid2D, WaveField, gaussian_packet, inverse_transform, overlap, transform,
)
from src.pipeline.potential import (
    ChannelPotential, InteractionPotential, groove_potential, interaction_grid, separation,
)


class SpectrumError(RuntimeError):
    """The lowest two eigenstates do not form an even/odd pair."""


@dataclass(frozen=True)
class DoubleWellSpectrum:
    psi_S: WaveField
    psi_A: WaveField
    E_S: float
    E_A: float
    hbar: float
    energies: Tuple[float, ...] = ()
    parities: Tuple[int, ...] = ()

    @property
    def E_bar(self) -> float:
        return 0.5 * (self.E_A + self.E_S)

    @property
    def omega_split(self) -> float:
        """Ω; the pair flips at 2Ω."""
        return (self.E_A - self.E_S) / (2.0 * self.hbar)

    @property
    def splitting(self) -> float:
        """2ħ̃Ω = E_A − E_S."""
        return self.E_A - self.E_S

    @property
    def grid(self) -> Grid1D:
        return self.psi_S.grid


@dataclass(frozen=True)
class BellBasis:
    """Localized states and the four two-particle Bell states built from them.

    u1 = (φ_L φ_R + φ_R φ_L)/√2, u2 = (φ_L φ_L + φ_R φ_R)/√2,
    u3 = (φ_L φ_L − φ_R φ_R)/√2, u4 = (φ_L φ_R − φ_R φ_L)/√2.
    """

    phi_L: WaveField
    phi_R: WaveField
    u1: WaveField
    u2: WaveField
    u3: WaveField
    u4: WaveField

    @property
    def states(self) -> Tuple[WaveField, WaveField, WaveField, WaveField]:
        return (self.u1, self.u2, self.u3, self.u4)


# Finite-difference eigensolver

def _interior(grid: Grid1D) -> Tuple[int, int]:
    """Center index c (x_c = 0) and the count M of points on each side.

    x_0 is the Dirichlet wall; its mirror image lies outside the periodic frame.
    """
    c = grid.n_points // 2
    if abs(grid.x[c]) > 1e-12 * grid.dx:
        raise ValueError("the eigensolver needs a grid symmetric about x=0")
    return c, c - 1


def _parity_blocks(u_half: np.ndarray, dx: float, hbar: float):
    """Tridiagonal (diag, offdiag) pairs for the even and odd sectors.

    ``u_half`` holds U(x_c + mΔx) for m = 0..M.
    """
    a = hbar**2 / (2.0 * dx**2)
    even_d = 2.0 * a + u_half
    even_e = np.full(len(u_half) - 1, -a)
    # symmetrised with ψ'_0 = ψ_0/√2
    even_e[0] = -np.sqrt(2.0) * a
    odd_d = 2.0 * a + u_half[1:]
    odd_e = np.full(len(u_half) - 2, -a)
    return (even_d, even_e), (odd_d, odd_e)


def _unfold(half: np.ndarray, grid: Grid1D, parity: int) -> np.ndarray:
    c, m_max = _interior(grid)
    psi = np.zeros(grid.n_points)
    psi[c:c + m_max + 1] = half
    psi[c - m_max:c] = parity * half[:0:-1]
    return psi


def _fix_sign(psi: np.ndarray, grid: Grid1D, parity: int) -> np.ndarray:
    """ψ_S(0) > 0; odd states positive on the left so (ψ_S + ψ_A)/√2 sits left."""
    if parity > 0:
        ref = psi[grid.n_points // 2]
        if abs(ref) < 1e-300:
            ref = psi[np.argmax(np.abs(psi))]
    else:
        left = grid.x < 0
        ref = np.sum(psi[left])
    return psi if ref >= 0 else -psi


def solve_double_well(
    channel: ChannelPotential,
    hbar: float = BASE_HBAR,
    n_states: int = 2,
    grid: Optional[Grid1D] = None,
    z: float = 0.0,
    degeneracy_tolerance: float = 1e-9,
) -> DoubleWellSpectrum:
    """Lowest eigenpairs of −(ħ̃²/2)d²/dx² + U(x, z) by finite differences.

    Each parity sector is a symmetric tridiagonal problem on the half grid,
    so parities are exact and near-degenerate pairs stay separated.
    """
    grid = grid or Grid1D.symmetric()
    if n_states < 2:
        raise ValueError(f"n_states must be >= 2, got {n_states}")
    c, m_max = _interior(grid)
    u_half = groove_potential(grid.x[c:c + m_max + 1], z, channel)
    (even_d, even_e), (odd_d, odd_e) = _parity_blocks(u_half, grid.dx, hbar)

    per_sector = (n_states + 1) // 2 + 1
    w_even, v_even = eigh_tridiagonal(even_d, even_e, select="i", select_range=(0, per_sector - 1))
    w_odd, v_odd = eigh_tridiagonal(odd_d, odd_e, select="i", select_range=(0, per_sector - 1))

    if w_even[1] < w_odd[0] - degeneracy_tolerance * abs(w_odd[0]):
        raise SpectrumError(
            f"second even level {w_even[1]:.6g} lies below the first odd level {w_odd[0]:.6g}; "
            f"the lowest pair is not a parity doublet (grid too coarse?)"
        )

    def field(vector: np.ndarray, parity: int) -> WaveField:
        if parity > 0:
            half = vector.copy()
            half[0] *= np.sqrt(2.0)
        else:
            half = np.concatenate(([0.0], vector))
        psi = _fix_sign(_unfold(half, grid, parity), grid, parity)
        return WaveField(grid, psi).normalized()

    levels = sorted(
        [(float(e), 1) for e in w_even] + [(float(e), -1) for e in w_odd]
    )[:n_states]
    return DoubleWellSpectrum(
        psi_S=field(v_even[:, 0], 1),
        psi_A=field(v_odd[:, 0], -1),
        E_S=float(w_even[0]),
        E_A=float(w_odd[0]),
        hbar=hbar,
        energies=tuple(e for e, _ in levels),
        parities=tuple(p for _, p in levels),
    )


def apply_hamiltonian(psi: np.ndarray, channel: ChannelPotential, grid: Grid1D, hbar: float,
                      z: float = 0.0) -> np.ndarray:
    """Finite-difference Hψ with ψ = 0 beyond the interior points."""
    c, m_max = _interior(grid)
    lo, hi = c - m_max, c + m_max + 1
    inner = psi[lo:hi]
    padded = np.concatenate(([0.0], inner, [0.0]))
    laplacian = (padded[2:] - 2.0 * inner + padded[:-2]) / grid.dx**2
    out = np.zeros_like(psi)
    out[lo:hi] = -0.5 * hbar**2 * laplacian + groove_potential(grid.x[lo:hi], z, channel) * inner
    return out


def eigen_residual(spectrum: DoubleWellSpectrum, channel: ChannelPotential) -> Dict[str, float]:
    """‖Hψ − Eψ‖/‖ψ‖ for both members of the pair."""
    out = {}
    for name, psi, energy in (("S", spectrum.psi_S, spectrum.E_S), ("A", spectrum.psi_A, spectrum.E_A)):
        vec = psi.amplitudes.real
        residual = apply_hamiltonian(vec, channel, spectrum.grid, spectrum.hbar) - energy * vec
        out[name] = float(np.linalg.norm(residual) / np.linalg.norm(vec))
    return out


def parity_defect(field: WaveField, parity: int) -> float:
    """max|ψ(x) − parity·ψ(−x)| over the points with a mirror image on the grid."""
    psi = field.amplitudes
    mirrored = np.roll(psi[::-1], 1)
    return float(np.max(np.abs(psi[1:] - parity * mirrored[1:])))


# Localized and two-particle states

def localized_states(spectrum: DoubleWellSpectrum) -> Tuple[WaveField, WaveField]:
    """φ_L = (ψ_S + ψ_A)/√2, φ_R = (ψ_S − ψ_A)/√2."""
    s, a = spectrum.psi_S.amplitudes, spectrum.psi_A.amplitudes
    phi_L = WaveField(spectrum.grid, (s + a) / np.sqrt(2.0))
    phi_R = WaveField(spectrum.grid, (s - a) / np.sqrt(2.0))
    return phi_L, phi_R


def product_state(a: WaveField, b: WaveField) -> np.ndarray:
    """a(x1)·b(x2) indexed [i1, i2]."""
    return np.multiply.outer(a.amplitudes, b.amplitudes)


def bell_basis(phi_L: WaveField, phi_R: WaveField) -> BellBasis:
    """Bell states u1..u4 over (x1, x2) from a pair of localized states.

    With the sign convention of :func:`solve_double_well` (ψ_S(0) > 0, ψ_A
    positive on the left), :func:`localized_states` gives φ_L = (ψ_S + ψ_A)/√2
    in the left groove, so u1 has one particle per groove and u2 both in one.
    """
    grid2 = Grid2D.square(phi_L.grid)
    LL, RR = product_state(phi_L, phi_L), product_state(phi_R, phi_R)
    LR, RL = product_state(phi_L, phi_R), product_state(phi_R, phi_L)
    r2 = np.sqrt(2.0)
    return BellBasis(
        phi_L=phi_L,
        phi_R=phi_R,
        u1=WaveField(grid2, (LR + RL) / r2),
        u2=WaveField(grid2, (LL + RR) / r2),
        u3=WaveField(grid2, (LL - RR) / r2),
        u4=WaveField(grid2, (LR - RL) / r2),
    )


def diagonal_elements(basis: BellBasis, v: InteractionPotential) -> Tuple[float, float, float, float]:
    """(u_i, V u_i) for i = 1..4."""
    x = basis.phi_L.grid.x
    v_grid = interaction_grid(x, x, v)
    cell = basis.u1.grid.cell
    return tuple(float(np.sum(u.density() * v_grid) * cell) for u in basis.states)


def mean_interaction(basis: BellBasis, v: InteractionPotential) -> float:
    """V̄ = ¼[(u2,Vu2) + (u3,Vu3) − (u1,Vu1) − (u4,Vu4)]."""
    m1, m2, m3, m4 = diagonal_elements(basis, v)
    return 0.25 * (m2 + m3 - m1 - m4)


def gaussian_mean_interaction(channel: ChannelPotential, hbar: float, v: InteractionPotential,
                              grid: Optional[Grid1D] = None) -> float:
    """V̄ with both localized states replaced by the harmonic ground-state Gaussian.

    Same-groove interaction minus the interaction across the barrier at
    separation d0, halved.
    """
    grid = grid or Grid1D.symmetric()
    x = grid.x
    sigma2 = hbar / (2.0 * channel.omega)
    rho = lambda center: np.exp(-((x - center) ** 2) / (2.0 * sigma2)) / np.sqrt(2.0 * np.pi * sigma2)
    half = 0.5 * channel.d0
    v_grid = interaction_grid(x, x, v)
    cell = grid.dx**2
    same = float(rho(-half) @ v_grid @ rho(-half) * cell)
    across = float(rho(-half) @ v_grid @ rho(half) * cell)
    return 0.5 * (same - across)


def unit_mean_interaction(spectrum: DoubleWellSpectrum, channel: ChannelPotential,
                          template: InteractionPotential, grid: Optional[Grid1D] = None) -> Tuple[float, float]:
    """(exact, Gaussian-approximation) V̄ of an interaction family at V0 = 1.

    V̄ is linear in V0, so a sweep scales these by each V0.
    """
    unit = template.with_strength(1.0)
    basis = bell_basis(*localized_states(spectrum))
    gaussian = gaussian_mean_interaction(channel, spectrum.hbar, unit, grid or spectrum.grid)
    return mean_interaction(basis, unit), gaussian


def coupling_time(spectrum: DoubleWellSpectrum) -> float:
    """Duration at frozen coupling that splits a localized state 50-50 (Ωt = π/4)."""
    return np.pi / (4.0 * spectrum.omega_split)


def imaginary_time_ground_state(
    channel: ChannelPotential,
    grid: Grid1D,
    hbar: float = BASE_HBAR,
    dtau: float = 1e-4,
    tau_total: float = 0.6,
    z: float = 0.0,
) -> WaveField:
    """Ground state by Strang stepping in imaginary time, renormalised every step.

    Starts from the even pair of harmonic packets, so the odd partner of the
    ground state is never populated.
    """
    center = 0.5 * separation(z, channel)
    start = gaussian_packet(grid, center, channel.omega, hbar).amplitudes
    psi = start + np.roll(start[::-1], 1)
    u = groove_potential(grid.x, z, channel)
    half_v = np.exp(-0.5 * dtau * u / hbar)
    kinetic = np.exp(-0.5 * hbar * dtau * grid.k_squared())
    cell = grid.dx
    for _ in range(int(round(tau_total / dtau))):
        psi = half_v * inverse_transform(kinetic * transform(half_v * psi))
        psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * cell)
    psi = psi.real
    if psi[grid.n_points // 2] < 0:
        psi = -psi
    return WaveField(grid, psi).normalized()


def export_rows(spectrum: DoubleWellSpectrum) -> List[Dict[str, float]]:
    """Rows (x, ψ_S, ψ_A) for the eigenpair CSV."""
    return [
        {"x": float(x), "psi_S": float(s), "psi_A": float(a)}
        for x, s, a in zip(spectrum.grid.x, spectrum.psi_S.amplitudes.real, spectrum.psi_A.amplitudes.real)
    ]


def main(verbose: bool = VERBOSE):
    """Print the doublet of the baseline channel."""
    channel = ChannelPotential.from_config()
    spectrum = solve_double_well(channel, BASE_HBAR, n_states=4)
    print("=" * 60)
    print("Double-Well Spectrum at z=0")
    print("=" * 60)
    print(f"  E_S = {spectrum.E_S:.6f}, E_A = {spectrum.E_A:.6f}")
    print(f"  2ħΩ = {spectrum.splitting:.6f}, Ω = {spectrum.omega_split:.6f}")
    print(f"  50-50 coupling time π/(4Ω) = {coupling_time(spectrum):.4f}")
    print(f"  Lowest levels: {', '.join(f'{e:.3f}' for e in spectrum.energies)}")
    if verbose:
        phi_L, phi_R = localized_states(spectrum)
        print(f"  ⟨φ_L|φ_R⟩ = {overlap(phi_L, phi_R).real:.2e}")


if __name__ == "__main__":
    main()
