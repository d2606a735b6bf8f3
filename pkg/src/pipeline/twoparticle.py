"""Two particles through the splitter: symmetrised input states, interacting
paraxial runs and the sweeps over interaction strength.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple
import sys

import numpy as np

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import (
    BASE_HBAR, COULOMB_EPSILON, LJ_EPSILON, LJ_RANGE_B, PLATEAU_TOLERANCE, SWEEP_WORKERS, VERBOSE,
)
from src.pipeline.grid import (
    Grid1D, Grid2D, WaveField, exchange_defect, gaussian_packet, overlap, probability_left_right,
    quadrant_probabilities,
)
from src.pipeline.potential import ChannelPotential, InteractionPotential
from src.pipeline.propagator import (
    ParaxialConfig, PropagationConfig, PropagationResult, final_plateau, propagate_paraxial,
)
from src.pipeline.spectrum import (
    DoubleWellSpectrum, bell_basis, localized_states, solve_double_well, unit_mean_interaction,
)

Statistics = Literal["boson", "fermion"]

EXCHANGE_SIGN = {"boson": 1, "fermion": -1}

# Coulomb ε ∈ [0.1, 1]; Lennard-Jones b ∈ [0.25, 0.5], ε ∈ [0.2, 0.35]
DEFAULT_FAMILIES: Tuple[InteractionPotential, ...] = (
    InteractionPotential("coulomb", v0=1.0, epsilon=0.1),
    InteractionPotential("coulomb", v0=1.0, epsilon=0.5),
    InteractionPotential("coulomb", v0=1.0, epsilon=COULOMB_EPSILON),
    InteractionPotential("lennard_jones", v0=1.0, epsilon=LJ_EPSILON, b=LJ_RANGE_B),
    InteractionPotential("lennard_jones", v0=1.0, epsilon=0.35, b=0.5),
)

SWEEP_COLUMNS = [
    "kind", "V0", "epsilon", "b", "V_bar_exact", "V_bar_gaussian", "omega_split",
    "abscissa", "P_same", "P_diff", "plateau_flag", "status",
]


class DegenerateStateError(ValueError):
    """Antisymmetrising two overlapping packets left (almost) nothing."""


@dataclass(frozen=True)
class TwoParticleState:
    statistics: Statistics
    field: WaveField
    t_start: float = 0.0

    def __post_init__(self):
        if self.statistics not in EXCHANGE_SIGN:
            raise ValueError(f"statistics must be 'boson' or 'fermion', got '{self.statistics}'")
        defect = exchange_defect(self.field, self.sign)
        if defect > 1e-10:
            raise ValueError(f"{self.statistics} state breaks exchange parity (defect {defect:.2e})")
        norm = self.field.norm()
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"two-particle state must be normalised, got {norm:.12f}")

    @property
    def sign(self) -> int:
        return EXCHANGE_SIGN[self.statistics]


def build_initial(
    statistics: Statistics,
    channel: ChannelPotential,
    hbar: float = BASE_HBAR,
    t_start: float = 0.0,
    grid: Optional[Grid1D] = None,
    min_norm: float = 1e-6,
) -> TwoParticleState:
    """Ψ ∝ φ_L(1)φ_R(2) ± φ_L(2)φ_R(1) from ground-state packets at ∓(1 + d0/2)."""
    grid = grid or Grid1D.symmetric()
    center = channel.input_center
    phi_L = gaussian_packet(grid, -center, channel.omega, hbar)
    phi_R = gaussian_packet(grid, center, channel.omega, hbar)
    sign = EXCHANGE_SIGN.get(statistics)
    if sign is None:
        raise ValueError(f"statistics must be 'boson' or 'fermion', got '{statistics}'")
    lr = np.multiply.outer(phi_L.amplitudes, phi_R.amplitudes)
    psi = lr + sign * lr.T
    field = WaveField(Grid2D.square(grid), psi)
    norm = field.norm()
    if norm < min_norm:
        raise DegenerateStateError(
            f"{statistics} norm {norm:.2e} below {min_norm:g}: packets overlap "
            f"(|⟨φ_L|φ_R⟩| = {abs(overlap(phi_L, phi_R)):.6f})"
        )
    return TwoParticleState(statistics, field.normalized(), t_start)


def run_statistics_experiment(
    state: TwoParticleState,
    channel: ChannelPotential,
    interaction: Optional[InteractionPotential],
    par: ParaxialConfig,
    cfg: PropagationConfig,
    verbose: bool = VERBOSE,
) -> PropagationResult:
    """Paraxial run of a two-particle state recording (P_same, P_diff) over time."""
    result = propagate_paraxial(
        state.field, channel, par, cfg, interaction=interaction, parity=state.sign, verbose=verbose,
    )
    series = result.series
    sums = series["P_same"] + series["P_diff"]
    variation = final_plateau(series["P_same"])
    result.extra["plateau_variation"] = variation
    result.checks["plateau_reached"] = plateau_flag(series["P_same"])
    result.checks["probabilities_complete"] = bool(np.max(np.abs(sums - 1.0)) < 1e-6)
    crossing = first_crossing_time(result.times, series["P_same"], series["P_diff"])
    result.extra["first_crossing_time"] = float("nan") if crossing is None else crossing
    result.extra["peak_time"] = transfer_peak_time(result.times, series["P_same"])
    return result


def plateau_flag(series: np.ndarray, tolerance: float = PLATEAU_TOLERANCE) -> bool:
    """True when the last tenth of the series varies by less than ``tolerance``."""
    return final_plateau(series) < tolerance


def first_crossing_time(times: np.ndarray, p_same: np.ndarray, p_diff: np.ndarray) -> Optional[float]:
    """First recorded time after the start with P_same ≥ P_diff."""
    hits = np.nonzero(p_same[1:] >= p_diff[1:])[0]
    return float(times[1 + hits[0]]) if len(hits) else None


def transfer_peak_time(times: np.ndarray, p_same: np.ndarray) -> float:
    """First recorded time at which P_same reaches its largest value."""
    return float(times[int(np.argmax(p_same))])


def abscissa_v0_grid(v_bar_unit: float, two_hbar_omega: float, points: int = 15,
                     max_abscissa: float = 3.0) -> np.ndarray:
    """V0 values whose |V̄|/(2ħΩ) spans (0, max_abscissa], plus V0 = 0.

    ``v_bar_unit`` is V̄ at V0 = 1; V̄ is linear in V0.
    """
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    if v_bar_unit == 0:
        raise ValueError("interaction has no mean energy at V0=1; cannot place it on the abscissa")
    v_max = max_abscissa * two_hbar_omega / abs(v_bar_unit)
    return np.concatenate(([0.0], np.geomspace(v_max / 20.0, v_max, points - 1)))


@dataclass(frozen=True)
class _SweepTask:
    statistics: Statistics
    interaction: InteractionPotential
    channel: ChannelPotential
    par: ParaxialConfig
    cfg: PropagationConfig
    grid: Grid1D
    v_bar_unit: float
    v_bar_gaussian_unit: float
    omega_split: float


def _sweep_point(task: _SweepTask) -> Dict:
    v = task.interaction
    v_bar = task.v_bar_unit * v.v0
    row = {
        "kind": v.kind,
        "V0": v.v0,
        "epsilon": v.epsilon,
        "b": v.b if v.kind == "lennard_jones" else float("nan"),
        "V_bar_exact": v_bar,
        "V_bar_gaussian": task.v_bar_gaussian_unit * v.v0,
        "omega_split": task.omega_split,
        "abscissa": abs(v_bar) / (2.0 * task.cfg.hbar * task.omega_split),
    }
    try:
        state = build_initial(task.statistics, task.channel, task.cfg.hbar, task.cfg.t_start, task.grid)
        interaction = v if v.v0 != 0 else None
        result = run_statistics_experiment(state, task.channel, interaction, task.par, task.cfg, verbose=False)
        final = result.final_probabilities()
        row.update(
            P_same=final["P_same"],
            P_diff=final["P_diff"],
            plateau_flag=result.checks["plateau_reached"],
            status="ok" if all(result.checks.values()) else "checks_failed",
        )
    except Exception as e:
        row.update(P_same=float("nan"), P_diff=float("nan"), plateau_flag=False, status=f"failed: {e}")
    return row


def interaction_sweep(
    statistics: Statistics,
    family: InteractionPotential,
    v0_grid: Sequence[float],
    channel: ChannelPotential,
    par: ParaxialConfig,
    cfg: PropagationConfig,
    grid: Optional[Grid1D] = None,
    spectrum: Optional[DoubleWellSpectrum] = None,
    workers: int = SWEEP_WORKERS,
    verbose: bool = VERBOSE,
) -> List[Dict]:
    """Final (P_same, P_diff) for each V0 of one interaction family.

    Rows come back sorted by V0 whatever order the workers finish in; a
    failing point is recorded with its error in ``status``.
    """
    grid = grid or Grid1D.symmetric()
    spectrum = spectrum or solve_double_well(channel, cfg.hbar, grid=grid)
    v_bar_unit, v_bar_gauss_unit = unit_mean_interaction(spectrum, channel, family, grid)
    tasks = [
        _SweepTask(statistics, family.with_strength(float(v0)), channel, par, cfg, grid,
                   v_bar_unit, v_bar_gauss_unit, spectrum.omega_split)
        for v0 in v0_grid
    ]
    return _run_tasks(tasks, workers, verbose)


def _run_tasks(tasks: List[_SweepTask], workers: int, verbose: bool) -> List[Dict]:
    rows: List[Dict] = []

    def report(row: Dict):
        rows.append(row)
        if not verbose:
            return
        label = f"{row['kind']} ε={row['epsilon']:g} V0={row['V0']:.4g}"
        if row["status"].startswith("failed"):
            print(f"  ✗ {label}: {row['status']}")
        else:
            glyph = "✓" if row["status"] == "ok" else "⚠"
            print(f"  {glyph} {label}: P_same={row['P_same']:.4f} ({len(rows)}/{len(tasks)})")

    if workers <= 1 or len(tasks) <= 1:
        for task in tasks:
            report(_sweep_point(task))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, task) for task in tasks]
            for future in as_completed(futures):
                report(future.result())

    return sorted(rows, key=lambda r: (r["kind"], r["epsilon"], _range_key(r), r["V0"]))


def _range_key(row: Dict) -> float:
    """Lennard-Jones b, or −1 for families without one (NaN or missing)."""
    b = row.get("b", float("nan"))
    return b if b == b else -1.0


def universality_curve(
    families: Sequence[InteractionPotential] = DEFAULT_FAMILIES,
    channel: Optional[ChannelPotential] = None,
    par: Optional[ParaxialConfig] = None,
    cfg: Optional[PropagationConfig] = None,
    spectrum: Optional[DoubleWellSpectrum] = None,
    grid: Optional[Grid1D] = None,
    points: int = 15,
    max_abscissa: float = 3.0,
    workers: int = SWEEP_WORKERS,
    verbose: bool = VERBOSE,
) -> List[Dict]:
    """Boson P_same against |V̄|/(2ħ̃Ω) for several interaction families."""
    channel = channel or ChannelPotential.from_config()
    par = par or ParaxialConfig()
    cfg = cfg or PropagationConfig()
    grid = grid or Grid1D.symmetric()
    spectrum = spectrum or solve_double_well(channel, cfg.hbar, grid=grid)
    tasks: List[_SweepTask] = []
    for family in families:
        v_bar_unit, v_bar_gauss_unit = unit_mean_interaction(spectrum, channel, family, grid)
        v0_grid = abscissa_v0_grid(v_bar_unit, spectrum.splitting, points, max_abscissa)
        if verbose:
            print(f"  • {family.kind} ε={family.epsilon:g}: V̄(V0=1)={v_bar_unit:.4g}, "
                  f"V0 up to {v0_grid[-1]:.4g}")
        tasks.extend(
            _SweepTask("boson", family.with_strength(float(v0)), channel, par, cfg, grid,
                       v_bar_unit, v_bar_gauss_unit, spectrum.omega_split)
            for v0 in v0_grid
        )
    return _run_tasks(tasks, workers, verbose)


def sign_symmetry_defect(rows: List[Dict]) -> float:
    """max |P_same(V0) − P_same(−V0)| over the V0 pairs present in a sweep.

    Pairs are matched within one family (kind, ε, b).
    """
    by_key = {(r["kind"], r["epsilon"], _range_key(r), r["V0"]): r["P_same"] for r in rows}
    gaps = [
        abs(p - by_key[(kind, eps, b, -v0)])
        for (kind, eps, b, v0), p in by_key.items()
        if v0 > 0 and (kind, eps, b, -v0) in by_key
    ]
    return float(np.nanmax(gaps)) if gaps else 0.0


def paired_leakage(spectrum: DoubleWellSpectrum) -> Dict[str, float]:
    """Same-side mass of the antisymmetrised localized pair at the frozen coupling point.

    With δ the share of each localized state lying beyond x=0, the pair
    φ_L∧φ_R has P_same = 2δ(1 − δ) although it never shares a groove.
    """
    phi_L, phi_R = localized_states(spectrum)
    delta = 0.5 * (probability_left_right(phi_L)["P_right"] + probability_left_right(phi_R)["P_left"])
    p_same = quadrant_probabilities(bell_basis(phi_L, phi_R).u4)["P_same"]
    return {"delta": delta, "P_same": p_same}


def main():
    """Build both input states and report their exchange properties."""
    channel = ChannelPotential.from_config()
    print("=" * 60)
    print("Two-Particle Input States")
    print("=" * 60)
    for kind in ("boson", "fermion"):
        state = build_initial(kind, channel)
        psi = state.field.amplitudes
        print(f"  {kind:8s}: norm={state.field.norm():.12f}, "
              f"max diagonal |Ψ|={np.max(np.abs(np.diag(psi))):.2e}")


if __name__ == "__main__":
    main()
