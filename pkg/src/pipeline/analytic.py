"""Closed-form models used as oracles for the numerical runs.

Covers the ideal 50-50 beam splitter acting on two particles, the
two-level flip between localized states, and the four-state model of
two interacting particles in the Bell basis u1..u4.
"""

from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Dict, Iterable, List, Literal, Tuple
import sys

import numpy as np

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import BASE_HBAR

Statistics = Literal["boson", "fermion"]

# 2×2 mode transformation a_out† = M a_in†
BEAM_SPLITTER = np.array([[1.0, -1j], [-1j, 1.0]]) / np.sqrt(2.0)

OUTCOMES = ("both_in_a", "both_in_b", "one_each")


def permanent(matrix: np.ndarray) -> complex:
    """Permanent by Glynn's formula with Gray-code ordering."""
    n = matrix.shape[0]
    d = np.ones(n)
    j = 0
    s = 1
    f = np.arange(n)
    v = matrix.sum(axis=0).astype(complex)
    p = np.prod(v)
    while j < n - 1:
        v -= 2 * d[j] * matrix[j]
        d[j] = -d[j]
        s = -s
        p += s * np.prod(v)
        f[0] = 0
        f[j] = f[j + 1]
        f[j + 1] = j + 1
        j = f[0]
    return complex(p / 2 ** (n - 1))


def output_amplitude(transfer: np.ndarray, occupation: Tuple[int, int], statistics: Statistics) -> complex:
    """Amplitude of an output occupation for one particle entering each port.

    ``transfer[j, i]`` is the weight of output mode j in input mode i.
    """
    rows = [mode for mode, count in enumerate(occupation) for _ in range(count)]
    sub = transfer[np.ix_(rows, [0, 1])]
    if statistics == "boson":
        value = permanent(sub)
    else:
        value = complex(np.linalg.det(sub))
    return value / np.sqrt(np.prod([factorial(n) for n in occupation]))


def beamsplitter_statistics(statistics: Statistics, splitter: np.ndarray = BEAM_SPLITTER) -> Dict[str, float]:
    """Output distribution of a_in† b_in†|0⟩ behind a 2×2 splitter."""
    if statistics not in ("boson", "fermion"):
        raise ValueError(f"statistics must be 'boson' or 'fermion', got '{statistics}'")
    # a_in† = M† a_out†, so output j carries weight conj(M[j, i]) in input i
    transfer = splitter.conj()
    occupations = {"both_in_a": (2, 0), "both_in_b": (0, 2), "one_each": (1, 1)}
    return {
        name: float(abs(output_amplitude(transfer, occ, statistics)) ** 2)
        for name, occ in occupations.items()
    }


def two_level_evolution(t: float, omega: float) -> Tuple[complex, complex]:
    """(cos Ωt, i sin Ωt): amplitudes on (φ_L, φ_R) starting from φ_L."""
    return complex(np.cos(omega * t)), complex(1j * np.sin(omega * t))


@dataclass(frozen=True)
class BellState4:
    """Amplitudes (a1..a4) on the Bell basis u1..u4."""

    amplitudes: Tuple[complex, complex, complex, complex]

    def __post_init__(self):
        if len(self.amplitudes) != 4:
            raise ValueError("a Bell state has four amplitudes")
        norm = float(np.sum(np.abs(np.asarray(self.amplitudes)) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"Bell state must be normalised, got Σ|a|² = {norm:.15f}")

    @classmethod
    def basis(cls, index: int) -> "BellState4":
        """u_index, 1-based."""
        a = [0j, 0j, 0j, 0j]
        a[index - 1] = 1.0 + 0j
        return cls(tuple(a))

    @classmethod
    def from_vector(cls, vector: Iterable[complex]) -> "BellState4":
        v = np.asarray(list(vector), dtype=complex)
        return cls(tuple(complex(x) for x in v / np.linalg.norm(v)))

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.amplitudes, dtype=complex)

    def populations(self) -> np.ndarray:
        return np.abs(self.vector) ** 2


def omega_eff(omega: float, v_bar: float, hbar: float = BASE_HBAR) -> float:
    """½√(4Ω² + V̄²/ħ̃²)."""
    return 0.5 * np.sqrt(4.0 * omega**2 + v_bar**2 / hbar**2)


def bell_hamiltonian(omega: float, v_bar: float, hbar: float = BASE_HBAR, e_bar: float = 0.0,
                     shifted: bool = False) -> np.ndarray:
    """4×4 Hamiltonian on (u1, u2, u3, u4).

    ``shifted=True`` removes the constant 2Ē + V̄ from the diagonal.
    """
    c = 2.0 * hbar * omega
    h = np.array([
        [2 * e_bar, -c, 0, 0],
        [-c, 2 * e_bar + 2 * v_bar, 0, 0],
        [0, 0, 2 * e_bar + 2 * v_bar, 0],
        [0, 0, 0, 2 * e_bar],
    ], dtype=complex)
    if shifted:
        h -= (2 * e_bar + v_bar) * np.eye(4)
    return h


def bell4_evolve(initial: BellState4, t: float, omega: float, v_bar: float,
                 hbar: float = BASE_HBAR, e_bar: float = 0.0, shifted: bool = False) -> BellState4:
    """Exact evolution under :func:`bell_hamiltonian`.

    The {u1, u2} block A = [[−V̄, −2ħΩ], [−2ħΩ, V̄]] squares to λ²I with
    λ = √(V̄² + 4ħ²Ω²), so exp(−iAt/ħ) = cos(λt/ħ)I − i sin(λt/ħ)A/λ.
    """
    shift = 0.0 if shifted else 2 * e_bar + v_bar
    a = initial.vector
    c = 2.0 * hbar * omega
    lam = np.hypot(v_bar, c)
    block = np.array([[-v_bar, -c], [-c, v_bar]], dtype=complex)
    theta = lam * t / hbar
    if lam > 0:
        u = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * block / lam
    else:
        u = np.eye(2, dtype=complex)
    out = np.empty(4, dtype=complex)
    out[:2] = u @ a[:2]
    out[2] = np.exp(-1j * v_bar * t / hbar) * a[2]
    out[3] = np.exp(1j * v_bar * t / hbar) * a[3]
    out *= np.exp(-1j * shift * t / hbar)
    return BellState4(tuple(complex(x) for x in out))


def detuned_max_transfer(omega: float, v_bar: float, hbar: float = BASE_HBAR) -> float:
    """Largest |a2|² reachable from u1: 4Ω²/(4Ω² + V̄²/ħ̃²)."""
    return 4.0 * omega**2 / (4.0 * omega**2 + v_bar**2 / hbar**2)


def analytic_universality_point(v_bar: float, two_hbar_omega: float = 8.0, hbar: float = BASE_HBAR) -> float:
    """P_same after a square coupling pulse calibrated to full bunching at V̄ = 0.

    Starts in u1 (one particle per groove) and returns |a2|² at Ωt = π/4.
    """
    omega = two_hbar_omega / (2.0 * hbar)
    t = np.pi / (4.0 * omega)
    final = bell4_evolve(BellState4.basis(1), t, omega, v_bar, hbar, shifted=True)
    return float(final.populations()[1])


def universality_rows(abscissae: Iterable[float], two_hbar_omega: float = 8.0,
                      hbar: float = BASE_HBAR) -> List[Dict[str, float]]:
    """Analytic (|V̄|/2ħΩ, P_same) points with the detuned transfer bound."""
    rows = []
    omega = two_hbar_omega / (2.0 * hbar)
    for x in abscissae:
        v_bar = float(x) * two_hbar_omega
        rows.append({
            "abscissa": float(x),
            "V_bar": v_bar,
            "P_same": analytic_universality_point(v_bar, two_hbar_omega, hbar),
            "max_transfer": detuned_max_transfer(omega, v_bar, hbar),
        })
    return rows


def main():
    """Print the ideal splitter statistics and a few universality points."""
    print("=" * 60)
    print("Analytic Models")
    print("=" * 60)
    for kind in ("boson", "fermion"):
        dist = beamsplitter_statistics(kind)
        print(f"  {kind:8s}: " + ", ".join(f"{k}={v:.3f}" for k, v in dist.items()))
    for row in universality_rows([0.0, 0.5, 1.0, np.sqrt(3.0), 2.0]):
        print(f"  |V̄|/2ħΩ = {row['abscissa']:.3f} → P_same = {row['P_same']:.4f} "
              f"(max transfer {row['max_transfer']:.3f})")


if __name__ == "__main__":
    main()
