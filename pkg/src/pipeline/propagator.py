"""Split-operator time evolution for the groove beam splitter.

The scaled Schrödinger equation iħ̃∂ψ/∂t = (p̃²/2 + U)ψ is advanced with
alternating kinetic factors exp(−iħ̃k²Δt/2) (diagonal in Fourier space) and
potential factors exp(−iUΔt/ħ̃) (diagonal in position space).
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple
import sys
import time

import numpy as np

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import (
    BASE_DT, BASE_HBAR, BASE_P0, BASE_T_START, BASE_T_END,
    SNAPSHOT_STRIDE, SERIES_STRIDE, TAIL_MASS_ABORT, TAIL_MASS_REPORT, VERBOSE,
)
from src.pipeline.grid import (
    Grid, Grid1D, Grid2D, WaveField, apply_momentum, channel_probabilities,
    exchange_defect, inverse_transform, momentum_density, probability_left_right,
    quadrant_probabilities, tail_mass, transform,
)
from src.pipeline.potential import (
    ChannelPotential, InteractionPotential, groove_potential, interaction_grid, separation,
)


SPLITTING_ORDERS = ("lie", "strang")


class BoundaryMassError(RuntimeError):
    """Probability reached the edge of the frame."""

    def __init__(self, mass: float, t: float, limit: float):
        super().__init__(
            f"boundary tail mass {mass:.3e} exceeds {limit:.1e} at t={t:.4f}; "
            f"enlarge the frame or shorten the run"
        )
        self.mass = mass
        self.t = t


@dataclass(frozen=True)
class PropagationConfig:
    dt: float = BASE_DT
    t_start: float = BASE_T_START
    t_end: float = BASE_T_END
    splitting_order: str = "strang"
    hbar: float = BASE_HBAR
    snapshot_stride: int = SNAPSHOT_STRIDE
    series_stride: int = SERIES_STRIDE

    def __post_init__(self):
        errors = []
        if not self.dt > 0:
            errors.append(f"dt must be > 0, got {self.dt}")
        if not self.t_end > self.t_start:
            errors.append(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        if self.splitting_order not in SPLITTING_ORDERS:
            errors.append(f"splitting_order must be one of {SPLITTING_ORDERS}, got '{self.splitting_order}'")
        if not self.hbar > 0:
            errors.append(f"hbar must be > 0, got {self.hbar}")
        if self.snapshot_stride < 1 or self.series_stride < 1:
            errors.append("strides must be >= 1")
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))

    def with_dt(self, dt: float) -> "PropagationConfig":
        return PropagationConfig(dt, self.t_start, self.t_end, self.splitting_order, self.hbar,
                                 self.snapshot_stride, self.series_stride)


@dataclass(frozen=True)
class ParaxialConfig:
    """Longitudinal drift replacing z by t·p0/m̃ (m̃ = 1)."""

    p0: float = BASE_P0
    mass: float = 1.0

    def __post_init__(self):
        if not self.p0 > 0:
            raise ValueError(f"p0 must be > 0, got {self.p0}")

    def z_at(self, t: float) -> float:
        return t * self.p0 / self.mass


# Potential evaluators

class PotentialEvaluator:
    """Potential on a grid as a function of time.

    ``omega`` is the transverse frequency entering the step-error estimate;
    ``transverse_axes`` are the axes along which that harmonic motion runs.
    """

    omega: float = 0.0
    transverse_axes: Tuple[int, ...] = (0,)
    time_dependent: bool = True

    def values(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def phase(self, t: float, tau: float) -> np.ndarray:
        """exp(−iU(t)τ) with τ = Δt/ħ̃."""
        return np.exp(-1j * tau * self.values(t))


class StaticPotential(PotentialEvaluator):
    time_dependent = False

    def __init__(self, values: np.ndarray, omega: float = 0.0, transverse_axes: Tuple[int, ...] = (0,)):
        self._values = np.asarray(values, dtype=float)
        self.omega = omega
        self.transverse_axes = transverse_axes
        self._phases: Dict[float, np.ndarray] = {}

    def values(self, t: float) -> np.ndarray:
        return self._values

    def phase(self, t: float, tau: float) -> np.ndarray:
        if tau not in self._phases:
            self._phases[tau] = np.exp(-1j * tau * self._values)
        return self._phases[tau]


class FrozenChannel(StaticPotential):
    """U(x, z) at a fixed z (z = 0 is the coupling point)."""

    def __init__(self, channel: ChannelPotential, grid: Grid1D, z: float = 0.0):
        super().__init__(groove_potential(grid.x, z, channel), omega=channel.omega)
        self.channel = channel


class ParaxialChannel(PotentialEvaluator):
    """U(x, t·p0/m̃) for one particle."""

    def __init__(self, channel: ChannelPotential, grid: Grid1D, par: ParaxialConfig):
        self.channel = channel
        self.grid = grid
        self.par = par
        self.omega = channel.omega

    def values(self, t: float) -> np.ndarray:
        return groove_potential(self.grid.x, self.par.z_at(t), self.channel)


class TwoParticleChannel(PotentialEvaluator):
    """U(x1, t·p0) + U(x2, t·p0) + V(|x1 − x2|) on a square grid."""

    transverse_axes = (0, 1)

    def __init__(
        self,
        channel: ChannelPotential,
        grid: Grid2D,
        par: ParaxialConfig,
        interaction: Optional[InteractionPotential] = None,
    ):
        if not grid.is_square:
            raise ValueError("two-particle runs need the same grid for both particles")
        self.channel = channel
        self.grid = grid
        self.par = par
        self.omega = channel.omega
        self.interaction = interaction
        x = grid.axis0.x
        self._v = interaction_grid(x, x, interaction) if interaction is not None else None
        self._v_phases: Dict[float, np.ndarray] = {}

    def values(self, t: float) -> np.ndarray:
        u = groove_potential(self.grid.axis0.x, self.par.z_at(t), self.channel)
        total = u[:, None] + u[None, :]
        return total + self._v if self._v is not None else total

    def phase(self, t: float, tau: float) -> np.ndarray:
        u = groove_potential(self.grid.axis0.x, self.par.z_at(t), self.channel)
        e = np.exp(-1j * tau * u)
        out = e[:, None] * e[None, :]
        if self._v is not None:
            if tau not in self._v_phases:
                self._v_phases[tau] = np.exp(-1j * tau * self._v)
            out *= self._v_phases[tau]
        return out


class CoMovingChannel(PotentialEvaluator):
    """U(x, ς + t·p0/m̃) on an (x, ς) grid travelling with the packet."""

    def __init__(self, channel: ChannelPotential, grid: Grid2D, par: ParaxialConfig):
        self.channel = channel
        self.grid = grid
        self.par = par
        self.omega = channel.omega
        self._x = grid.axis0.x[:, None]
        self._s = grid.axis1.x[None, :]

    def values(self, t: float) -> np.ndarray:
        return groove_potential(self._x, self._s + self.par.z_at(t), self.channel)


# Diagnostics

def step_error_estimate(
    field: WaveField,
    potential: PotentialEvaluator,
    cfg: PropagationConfig,
    t: float = 0.0,
) -> float:
    """|(Δt²ω̃²/4)·⟨x̃p̃ + p̃x̃⟩/ħ̃|, the leading commutator correction of a step."""
    psi = field.amplitudes
    total = 0.0
    for axis in potential.transverse_axes:
        x = field.grid.coordinate(axis)
        xp = x * apply_momentum(psi, field.grid, cfg.hbar, axis)
        px = apply_momentum(x * psi, field.grid, cfg.hbar, axis)
        total += float(np.real(np.sum(np.conj(psi) * (xp + px)) * field.grid.cell))
    return abs(cfg.dt**2 * potential.omega**2 / 4.0 * total / cfg.hbar)


@dataclass
class PropagationResult:
    """Time series, frames and final state of one run."""

    times: np.ndarray
    series: Dict[str, np.ndarray]
    snapshots: List[Tuple[float, np.ndarray]]
    final: WaveField
    error_estimates: np.ndarray
    max_tail_mass: float
    norm_drift: float
    elapsed: float
    checks: Dict[str, bool] = field(default_factory=dict)
    extra: Dict[str, float] = field(default_factory=dict)

    def final_probabilities(self) -> Dict[str, float]:
        return {key: float(values[-1]) for key, values in self.series.items()}

    def mean_error_estimate(self) -> float:
        return float(np.mean(self.error_estimates)) if len(self.error_estimates) else 0.0


Observer = Callable[[int, float, np.ndarray], None]


class SplitOperatorPropagator:
    """Lie or Strang split-operator stepping on a periodic grid."""

    def __init__(self, grid: Grid, cfg: PropagationConfig, verbose: bool = VERBOSE):
        self.grid = grid
        self.cfg = cfg
        self.verbose = verbose
        self._k2 = grid.k_squared()
        self._kinetic: Dict[float, np.ndarray] = {}

    def kinetic_phase(self, dt: float) -> np.ndarray:
        """exp(−iTΔt/ħ̃) with T = ħ̃²k²/2."""
        if dt not in self._kinetic:
            self._kinetic[dt] = np.exp(-0.5j * self.cfg.hbar * dt * self._k2)
        return self._kinetic[dt]

    def step(self, field: WaveField, potential: PotentialEvaluator, t: float, dt: Optional[float] = None) -> WaveField:
        """Advance one step from t; a negative ``dt`` steps backwards."""
        dt = self.cfg.dt if dt is None else dt
        tau = dt / self.cfg.hbar
        psi = field.amplitudes
        if self.cfg.splitting_order == "strang":
            half = self.kinetic_phase(0.5 * dt)
            psi = inverse_transform(half * transform(psi))
            psi = psi * potential.phase(t + 0.5 * dt, tau)
            psi = inverse_transform(half * transform(psi))
        else:
            psi = psi * potential.phase(t, tau)
            psi = inverse_transform(self.kinetic_phase(dt) * transform(psi))
        return WaveField(field.grid, psi, field.norm_tracking)

    def evolve(
        self,
        field: WaveField,
        potential: PotentialEvaluator,
        t0: float,
        n_steps: int,
        reverse: bool = False,
        observe: Optional[Observer] = None,
        observe_every: int = 0,
    ) -> WaveField:
        """Run ``n_steps`` steps from t0, calling ``observe(step, t, psi)`` every
        ``observe_every`` steps and after the last one.

        Consecutive Strang kinetic half-steps are fused unless a state is observed
        in between, which leaves the result identical to repeated :meth:`step`.
        """
        dt = -self.cfg.dt if reverse else self.cfg.dt
        tau = dt / self.cfg.hbar
        psi = field.amplitudes.copy()

        def observed(n: int) -> bool:
            return n == n_steps or (observe_every > 0 and n % observe_every == 0)

        if self.cfg.splitting_order == "strang":
            half = self.kinetic_phase(0.5 * dt)
            full = self.kinetic_phase(dt)
            phi = half * transform(psi)
            for n in range(1, n_steps + 1):
                t_mid = t0 + (n - 0.5) * dt
                psi = inverse_transform(phi)
                psi *= potential.phase(t_mid, tau)
                phi = transform(psi)
                if observed(n):
                    phi *= half
                    psi = inverse_transform(phi)
                    if observe is not None:
                        observe(n, t0 + n * dt, psi)
                    phi *= half
                else:
                    phi *= full
        else:
            full = self.kinetic_phase(dt)
            for n in range(1, n_steps + 1):
                psi *= potential.phase(t0 + (n - 1) * dt, tau)
                psi = inverse_transform(full * transform(psi))
                if observe is not None and observed(n):
                    observe(n, t0 + n * dt, psi)
        return WaveField(field.grid, psi, field.norm_tracking)

    def run(
        self,
        initial: WaveField,
        potential: PotentialEvaluator,
        observable: Callable[[WaveField], Dict[str, float]],
        label: str = "run",
        parity: Optional[int] = None,
        tail_limit: float = TAIL_MASS_ABORT,
    ) -> PropagationResult:
        """Propagate over [t_start, t_end] recording observable values, frames and diagnostics."""
        cfg = self.cfg
        n_steps = cfg.n_steps
        norm0 = initial.norm()
        times: List[float] = []
        records: Dict[str, List[float]] = {}
        errors: List[float] = []
        snapshots: List[Tuple[float, np.ndarray]] = []
        state = {"tail": tail_mass(initial), "parity": 0.0}

        def record(n: int, t: float, psi: np.ndarray):
            current = WaveField(initial.grid, psi)
            tail = tail_mass(current)
            state["tail"] = max(state["tail"], tail)
            if tail > tail_limit:
                raise BoundaryMassError(tail, t, tail_limit)
            if n % cfg.series_stride == 0 or n == n_steps or n == 0:
                times.append(t)
                for key, value in observable(current).items():
                    records.setdefault(key, []).append(value)
                errors.append(step_error_estimate(current, potential, cfg, t))
                if parity is not None:
                    state["parity"] = max(state["parity"], exchange_defect(current, parity))
            if n % cfg.snapshot_stride == 0 or n == n_steps or n == 0:
                snapshots.append((t, current.density()))

        if self.verbose:
            print(f"  ⏳ {label}: {n_steps} {cfg.splitting_order} steps, dt={cfg.dt:g}, "
                  f"t ∈ [{cfg.t_start:g}, {cfg.t_end:g}]")
        start = time.time()
        record(0, cfg.t_start, initial.amplitudes)
        stride = int(np.gcd(cfg.series_stride, cfg.snapshot_stride))
        final = self.evolve(initial, potential, cfg.t_start, n_steps, observe=record, observe_every=stride)
        elapsed = time.time() - start

        drift = abs(final.norm() - norm0)
        result = PropagationResult(
            times=np.array(times),
            series={key: np.array(values) for key, values in records.items()},
            snapshots=snapshots,
            final=final,
            error_estimates=np.array(errors),
            max_tail_mass=state["tail"],
            norm_drift=drift,
            elapsed=elapsed,
        )
        result.checks["norm_conserved"] = drift < 1e-10
        result.checks["boundary_tail_small"] = state["tail"] < TAIL_MASS_REPORT
        if parity is not None:
            result.extra["exchange_defect"] = state["parity"]
            result.checks["exchange_parity_kept"] = state["parity"] < 1e-8
        if self.verbose:
            status = "✓" if all(result.checks.values()) else "⚠"
            print(f"  {status} {label} finished in {elapsed:.2f}s (norm drift {drift:.1e}, "
                  f"max tail {state['tail']:.1e})")
        return result


# Drivers

def propagate_static(
    initial: WaveField,
    potential: PotentialEvaluator,
    cfg: PropagationConfig,
    verbose: bool = VERBOSE,
    observable: Callable[[WaveField], Dict[str, float]] = probability_left_right,
) -> PropagationResult:
    """Evolution in a time-independent potential (1D valley probabilities by default)."""
    propagator = SplitOperatorPropagator(initial.grid, cfg, verbose=verbose)
    return propagator.run(initial, potential, observable, label="static run")


def propagate_paraxial(
    initial: WaveField,
    channel: ChannelPotential,
    par: ParaxialConfig,
    cfg: PropagationConfig,
    interaction: Optional[InteractionPotential] = None,
    parity: Optional[int] = None,
    verbose: bool = VERBOSE,
) -> PropagationResult:
    """Transverse evolution under the potential sweeping by at velocity p0/m̃.

    A 1D field gives (P_left, P_right) series; a square 2D field is a
    two-particle state over (x1, x2) and gives (P_same, P_diff).
    """
    start_gap = _check_decoupled(channel, par, cfg, verbose)
    if initial.grid.ndim == 1:
        potential = ParaxialChannel(channel, initial.grid, par)
        observable = probability_left_right
        label = "paraxial run"
    else:
        potential = TwoParticleChannel(channel, initial.grid, par, interaction)
        observable = quadrant_probabilities
        label = "two-particle paraxial run"
    propagator = SplitOperatorPropagator(initial.grid, cfg, verbose=verbose)
    result = propagator.run(initial, potential, observable, label=label, parity=parity)
    result.extra["start_separation_gap"] = start_gap
    probabilities = result.final_probabilities()
    if "total" in probabilities:
        result.checks["probabilities_sum_to_norm"] = abs(probabilities["total"] - result.final.norm()) < 1e-12
    return result


def to_comoving(field: WaveField, p0: float, hbar: float) -> WaveField:
    """Divide out the carrier exp(i p0 ς/ħ̃) along axis 1."""
    s = field.grid.coordinate(1)
    return WaveField(field.grid, field.amplitudes * np.exp(-1j * p0 * s / hbar), field.norm_tracking)


def propagate_2d(
    initial: WaveField,
    channel: ChannelPotential,
    cfg: PropagationConfig,
    par: Optional[ParaxialConfig] = None,
    verbose: bool = VERBOSE,
) -> PropagationResult:
    """Full (x, z) evolution, computed in the frame moving with the packet.

    ``initial`` is the lab-frame packet on an (x, ς) grid carrying its
    longitudinal momentum as a phase; the run keeps the ∂²/∂ς² term, so
    this is the exact 2D problem and the paraxial run is its approximation.
    """
    par = par or ParaxialConfig()
    moving = to_comoving(initial, par.p0, cfg.hbar)
    potential = CoMovingChannel(channel, initial.grid, par)
    propagator = SplitOperatorPropagator(initial.grid, cfg, verbose=verbose)
    result = propagator.run(moving, potential, channel_probabilities, label="2D run")
    k, spectrum = momentum_density(result.final, axis=1)
    backward = float(np.sum(spectrum[cfg.hbar * k + par.p0 < 0]))
    result.extra["backscattered_mass"] = backward
    result.checks["no_backscattering"] = backward < 1e-3
    return result


def _check_decoupled(channel: ChannelPotential, par: ParaxialConfig, cfg: PropagationConfig,
                     verbose: bool, tolerance: float = 1e-6) -> float:
    """Asymptotic separation minus d at t_start; short test windows only warn."""
    gap = channel.asymptotic_separation - separation(par.z_at(cfg.t_start), channel)
    if gap > tolerance and verbose:
        print(f"  ⚠ channels not fully decoupled at t_start={cfg.t_start:g}: "
              f"d is {gap:.2e} below its asymptote")
    return float(gap)


def final_plateau(series: np.ndarray, fraction: float = 0.1) -> float:
    """Max − min of a series over its last ``fraction``."""
    n = max(int(np.ceil(len(series) * fraction)), 1)
    tail = series[-n:]
    return float(np.max(tail) - np.min(tail))


def convergence_order(errors: Sequence[float], steps: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(Δt)."""
    slope, _ = np.polyfit(np.log(np.asarray(steps)), np.log(np.asarray(errors)), 1)
    return float(slope)
