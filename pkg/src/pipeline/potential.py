"""Double-well channel potential and regularized particle interactions."""

from dataclasses import dataclass
from pathlib import Path
from typing import Literal
import sys

import numpy as np

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import BASE_OMEGA, BASE_D0, BASE_ETA


ASYMPTOTIC_GAP = 2.0

InteractionKind = Literal["coulomb", "lennard_jones"]


@dataclass(frozen=True)
class ChannelPotential:
    """Two harmonic grooves whose separation d(z) narrows to d0 at z=0."""

    omega: float = BASE_OMEGA
    d0: float = BASE_D0
    eta: float = BASE_ETA

    def __post_init__(self):
        for name in ("omega", "d0", "eta"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @classmethod
    def from_config(cls) -> "ChannelPotential":
        """Create the baseline channel."""
        return cls(omega=BASE_OMEGA, d0=BASE_D0, eta=BASE_ETA)

    @property
    def asymptotic_separation(self) -> float:
        return ASYMPTOTIC_GAP + self.d0

    @property
    def input_center(self) -> float:
        """|x| of a valley bottom far from the coupling region."""
        return 1.0 + 0.5 * self.d0


@dataclass(frozen=True)
class InteractionPotential:
    """Coulomb or Lennard-Jones interaction softened at the origin by ε."""

    kind: InteractionKind
    v0: float
    epsilon: float
    b: float = 0.25

    def __post_init__(self):
        if self.kind not in ("coulomb", "lennard_jones"):
            raise ValueError(f"unknown interaction kind '{self.kind}'")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0 (unregularized singularity), got {self.epsilon}")
        if self.kind == "lennard_jones" and not self.b > 0:
            raise ValueError(f"Lennard-Jones range b must be > 0, got {self.b}")

    def with_strength(self, v0: float) -> "InteractionPotential":
        return InteractionPotential(kind=self.kind, v0=v0, epsilon=self.epsilon, b=self.b)

    @property
    def length(self) -> float:
        """Largest length parameter; beyond ~100 of these the tail is negligible."""
        return max(self.epsilon, self.b) if self.kind == "lennard_jones" else self.epsilon


def separation(z, p: ChannelPotential):
    """d(z) = 2 + d0 − 2/cosh(z/η)."""
    z = np.asarray(z, dtype=float)
    # 1/cosh overflows gracefully to 0 far from the coupling region
    with np.errstate(over="ignore"):
        d = ASYMPTOTIC_GAP + p.d0 - ASYMPTOTIC_GAP / np.cosh(z / p.eta)
    return d if d.ndim else float(d)


def groove_potential(x, z, p: ChannelPotential):
    """Product-over-sum of the two harmonic wells centred at ±d(z)/2."""
    x = np.asarray(x, dtype=float)
    half = 0.5 * np.asarray(separation(z, p))
    a = (x + half) ** 2
    c = (x - half) ** 2
    num = a * c
    den = a + c
    # removable point x=0, d=0
    safe = np.where(den > 0, den, 1.0)
    u = np.where(den > 0, 0.5 * p.omega**2 * num / safe, 0.0)
    return u if u.ndim else float(u)


def barrier_height(p: ChannelPotential) -> float:
    """U(0, 0) = ω̃²d0²/16."""
    return p.omega**2 * p.d0**2 / 16.0


def potential_grid(xs: np.ndarray, zs: np.ndarray, p: ChannelPotential) -> np.ndarray:
    """U over the (x, z) mesh, indexed [ix, iz]."""
    X, Z = np.meshgrid(xs, zs, indexing="ij")
    return groove_potential(X, Z, p)


def cross_section(x: float, zs: np.ndarray, p: ChannelPotential) -> np.ndarray:
    """U(x, z) along z at fixed x."""
    return groove_potential(np.full_like(np.asarray(zs, dtype=float), x), zs, p)


def interaction(r, v: InteractionPotential):
    """V(r) with r_ε = √(r² + ε²)."""
    r = np.asarray(r, dtype=float)
    r_eps = np.sqrt(r**2 + v.epsilon**2)
    if v.kind == "coulomb":
        value = v.v0 / r_eps
    else:
        s6 = (v.b / r_eps) ** 6
        value = v.v0 * (s6 * s6 - s6)
    return value if value.ndim else float(value)


def interaction_grid(x1: np.ndarray, x2: np.ndarray, v: InteractionPotential) -> np.ndarray:
    """V(|x1 − x2|) over the two-particle mesh, indexed [i1, i2]."""
    return interaction(np.abs(x1[:, None] - x2[None, :]), v)


def main():
    """Print the baseline channel geometry."""
    channel = ChannelPotential.from_config()
    print("=" * 60)
    print("Groove Potential")
    print("=" * 60)
    print(f"  ω̃ = {channel.omega}, d0 = {channel.d0}, η = {channel.eta}")
    print(f"  Barrier height U(0,0): {barrier_height(channel):.3f}")
    for z in (0.0, channel.eta, 5 * channel.eta):
        print(f"  d({z:g}) = {separation(z, channel):.6f}")
    coulomb = InteractionPotential("coulomb", v0=50.0, epsilon=1.0)
    print(f"  Coulomb V(0) = {interaction(0.0, coulomb):.3f}")


if __name__ == "__main__":
    main()
