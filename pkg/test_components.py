#!/usr/bin/env python3
"""Test individual components of the simulation pipeline."""

import inspect
import itertools
import sys
import tempfile
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.linalg import expm

sys.path.append(str(Path(__file__).parent))

from src.pipeline.analytic import (
    BellState4, analytic_universality_point, beamsplitter_statistics, bell4_evolve,
    bell_hamiltonian, detuned_max_transfer, omega_eff, permanent, two_level_evolution,
)
from src.pipeline.export import ResultExporter, make_run_id, read_rows
from src.pipeline.grid import (
    Grid1D, Grid2D, PacketFitError, WaveField, gaussian_packet, inverse_transform, moments, overlap,
    probability_left_right, quadrant_probabilities, tail_mass, transform,
)
from src.pipeline.potential import (
    ChannelPotential, InteractionPotential, barrier_height, groove_potential, interaction,
    separation,
)
from src.pipeline.propagator import (
    BoundaryMassError, FrozenChannel, ParaxialChannel, ParaxialConfig, PropagationConfig,
    SplitOperatorPropagator, StaticPotential, convergence_order, final_plateau, propagate_paraxial,
    propagate_static, step_error_estimate,
)
from src.pipeline.recipes import (
    RECIPES, ExperimentRunner, UnknownRecipeError, fit_log_tunneling, frozen_flip, run_experiment,
)
from src.pipeline.run_config import RunConfig, emit, parse
from src.pipeline.scaling import (
    ELECTRON, RUBIDIUM_87, ScaledUnits, commutator_expectation, scale, uncertainty_product, unscale,
    velocity_from_momentum,
)
from src.pipeline.spectrum import (
    bell_basis, coupling_time, diagonal_elements, eigen_residual, gaussian_mean_interaction,
    imaginary_time_ground_state, localized_states, mean_interaction, parity_defect,
    solve_double_well, unit_mean_interaction,
)
from src.pipeline.twoparticle import (
    DegenerateStateError, TwoParticleState, abscissa_v0_grid, build_initial,
    first_crossing_time, interaction_sweep, paired_leakage, plateau_flag, run_statistics_experiment,
    sign_symmetry_defect, transfer_peak_time,
)
from src.cli.main import main as cli_main

HBAR = 6.0
CHANNEL = ChannelPotential()
COULOMB = InteractionPotential("coulomb", v0=50.0, epsilon=1.0)


@pytest.fixture(scope="module")
def spectrum():
    return solve_double_well(CHANNEL, HBAR, n_states=4)


# Scaling

def test_rubidium_scales_give_hbar_near_six():
    assert RUBIDIUM_87.hbar_eff == pytest.approx(6.0, rel=0.05)


def test_electron_preset_hbar():
    # ħ·6e-12 s / (m_e·(40e-9 m)²) worked by hand
    assert ELECTRON.hbar_eff == pytest.approx(0.43413, rel=1e-4)


def test_hbar_eff_invariant_under_length_time_rescaling():
    base = RUBIDIUM_87
    for c in (0.5, 3.0, 17.0):
        stretched = ScaledUnits(c * base.length_scale, c**2 * base.time_scale, base.mass)
        assert stretched.hbar_eff == pytest.approx(base.hbar_eff, rel=1e-12)


def test_beam_velocity_at_high_momentum():
    assert velocity_from_momentum(1000.0, RUBIDIUM_87) == pytest.approx(1.25)


def test_unscale_inverts_scale():
    physical = {"x": 2.5e-7, "t": 1e-4, "p": 3e-27}
    back = unscale(scale(physical, RUBIDIUM_87), RUBIDIUM_87)
    for key, value in physical.items():
        assert back[key] == pytest.approx(value, rel=1e-12)


def test_commutator_and_uncertainty_on_ground_state():
    packet = gaussian_packet(Grid1D.symmetric(), 0.0, 30.0, HBAR)
    c = commutator_expectation(packet, HBAR)
    assert c.imag == pytest.approx(HBAR, rel=1e-6)
    assert abs(c.real) < 1e-8
    assert uncertainty_product(packet, HBAR) == pytest.approx(HBAR / 2, rel=1e-6)


# Potential

def test_barrier_height_and_minimum_separation():
    assert groove_potential(0.0, 0.0, CHANNEL) == pytest.approx(barrier_height(CHANNEL), rel=1e-12)
    assert separation(0.0, CHANNEL) == pytest.approx(CHANNEL.d0)
    assert separation(40 * CHANNEL.eta, CHANNEL) == pytest.approx(CHANNEL.asymptotic_separation)


def test_groove_potential_is_even_and_vanishes_at_valley_bottoms():
    x = np.linspace(-4, 4, 101)
    np.testing.assert_allclose(groove_potential(x, 3.0, CHANNEL), groove_potential(-x, 3.0, CHANNEL))
    half = 0.5 * separation(3.0, CHANNEL)
    assert groove_potential(half, 3.0, CHANNEL) == pytest.approx(0.0, abs=1e-12)


def test_regularized_interactions():
    assert interaction(0.0, COULOMB) == pytest.approx(50.0)
    lj = InteractionPotential("lennard_jones", v0=1.0, epsilon=0.2, b=0.25)
    assert np.isfinite(interaction(0.0, lj))
    with pytest.raises(ValueError):
        InteractionPotential("coulomb", v0=1.0, epsilon=0.0)
    with pytest.raises(ValueError):
        ChannelPotential(d0=-1.0)


def test_lennard_jones_zero_and_coulomb_monotone():
    # r_ε = b at r = √(0.25² − 0.2²) = 0.15
    lj = InteractionPotential("lennard_jones", v0=3.0, epsilon=0.2, b=0.25)
    assert interaction(0.15, lj) == pytest.approx(0.0, abs=1e-10)
    assert interaction(0.1, lj) > 0 > interaction(0.3, lj)
    r = np.linspace(0.0, 10.0, 201)
    assert np.all(np.diff(interaction(r, COULOMB)) < 0)


# Grid

def test_grid_rejects_bad_sizes():
    with pytest.raises(ValueError):
        Grid1D(n_points=100)
    with pytest.raises(ValueError):
        Grid1D(n_points=32)


def test_gaussian_packet_normalised_and_centred():
    packet = gaussian_packet(Grid1D.symmetric(), CHANNEL.input_center, 30.0, HBAR)
    assert packet.norm() == pytest.approx(1.0, abs=1e-12)
    mean, width = moments(packet)
    assert mean == pytest.approx(CHANNEL.input_center, abs=1e-10)
    assert width == pytest.approx(np.sqrt(HBAR / 60.0), rel=1e-6)
    probs = probability_left_right(packet)
    assert probs["P_right"] > 0.999999
    assert tail_mass(packet) < 1e-20


def test_packet_outside_grid_rejected():
    with pytest.raises(PacketFitError):
        gaussian_packet(Grid1D.symmetric(), 7.5, 30.0, HBAR)


def test_transform_preserves_norm_and_inverts():
    rng = np.random.default_rng(5)
    for shape in ((256,), (64, 64)):
        psi = rng.normal(size=shape) + 1j * rng.normal(size=shape)
        phi = transform(psi)
        assert np.sum(np.abs(phi) ** 2) == pytest.approx(np.sum(np.abs(psi) ** 2), rel=1e-10)
        np.testing.assert_allclose(inverse_transform(phi), psi, atol=1e-12)


def test_symmetric_superposition_splits_evenly():
    grid = Grid1D.symmetric()
    left = gaussian_packet(grid, -2.0, 30.0, HBAR)
    right = gaussian_packet(grid, 2.0, 30.0, HBAR)
    both = WaveField(grid, (left.amplitudes + right.amplitudes) / np.sqrt(2.0))
    assert probability_left_right(both)["P_left"] == pytest.approx(0.5, abs=1e-8)


def test_quadrant_probabilities_for_product_and_bunched_states():
    grid = Grid1D.symmetric(128)
    grid2 = Grid2D.square(grid)
    left = gaussian_packet(grid, -2.0, 30.0, HBAR).amplitudes
    right = gaussian_packet(grid, 2.0, 30.0, HBAR).amplitudes
    rr = WaveField(grid2, np.multiply.outer(right, right))
    lr = WaveField(grid2, np.multiply.outer(left, right))
    bunched = WaveField(grid2, (np.multiply.outer(left, left) + np.multiply.outer(right, right)) / np.sqrt(2.0))
    assert quadrant_probabilities(rr)["P_same"] == pytest.approx(1.0, abs=1e-8)
    assert quadrant_probabilities(lr)["P_diff"] == pytest.approx(1.0, abs=1e-8)
    assert quadrant_probabilities(bunched)["P_same"] == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ValueError):
        quadrant_probabilities(WaveField(grid, left))


# Propagator

def test_norm_conserved_over_twenty_thousand_steps():
    cfg = PropagationConfig(snapshot_stride=20000, series_stride=1000)
    packet = gaussian_packet(Grid1D.symmetric(), CHANNEL.input_center, CHANNEL.omega, HBAR)
    result = propagate_paraxial(packet, CHANNEL, ParaxialConfig(), cfg, verbose=False)
    assert result.norm_drift < 1e-10
    assert result.checks["norm_conserved"]


def test_evolve_matches_repeated_steps():
    grid = Grid1D.symmetric()
    cfg = PropagationConfig(dt=1e-3, t_start=-0.05, t_end=0.05)
    potential = ParaxialChannel(CHANNEL, grid, ParaxialConfig())
    packet = gaussian_packet(grid, CHANNEL.input_center, CHANNEL.omega, HBAR)
    for order in ("strang", "lie"):
        propagator = SplitOperatorPropagator(grid, PropagationConfig(splitting_order=order), verbose=False)
        stepped = packet
        for n in range(10):
            stepped = propagator.step(stepped, potential, cfg.t_start + n * propagator.cfg.dt)
        fused = propagator.evolve(packet, potential, cfg.t_start, 10, observe=lambda *a: None, observe_every=3)
        np.testing.assert_allclose(fused.amplitudes, stepped.amplitudes, atol=1e-12)


def test_strang_time_reversal_recovers_initial_state():
    grid = Grid1D.symmetric()
    cfg = PropagationConfig()
    potential = ParaxialChannel(CHANNEL, grid, ParaxialConfig())
    packet = gaussian_packet(grid, CHANNEL.input_center, CHANNEL.omega, HBAR)
    propagator = SplitOperatorPropagator(grid, cfg, verbose=False)
    forward = propagator.evolve(packet, potential, -1.0, 1000)
    back = propagator.evolve(forward, potential, 0.0, 1000, reverse=True)
    assert np.max(np.abs(back.amplitudes - packet.amplitudes)) < 1e-10


def test_splitting_convergence_orders():
    grid = Grid1D.symmetric()
    potential = FrozenChannel(CHANNEL, grid)
    packet = gaussian_packet(grid, CHANNEL.input_center, CHANNEL.omega, HBAR)
    t_total = 0.05
    steps = [1e-3, 5e-4, 2.5e-4]

    def final(dt: float, order: str) -> np.ndarray:
        cfg = PropagationConfig(dt=dt, t_start=0.0, t_end=t_total, splitting_order=order)
        propagator = SplitOperatorPropagator(grid, cfg, verbose=False)
        return propagator.evolve(packet, potential, 0.0, cfg.n_steps).amplitudes

    reference = final(steps[-1] / 16, "strang")
    for order, nominal in (("strang", 2.0), ("lie", 1.0)):
        errors = [np.sqrt(np.sum(np.abs(final(dt, order) - reference) ** 2) * grid.dx) for dt in steps]
        measured = convergence_order(errors, steps)
        assert nominal / 1.5 < measured < nominal * 1.5, f"{order}: order {measured:.3f}"


def test_boundary_mass_aborts_run():
    grid = Grid1D.symmetric()
    packet = gaussian_packet(grid, 0.0, 30.0, HBAR, momentum=20.0)
    cfg = PropagationConfig(t_start=0.0, t_end=1.0)
    with pytest.raises(BoundaryMassError) as info:
        propagate_static(packet, StaticPotential(np.zeros(grid.n_points)), cfg, verbose=False)
    assert info.value.mass > 1e-4


def test_invalid_propagation_config():
    with pytest.raises(ValueError):
        PropagationConfig(dt=-1e-3)
    with pytest.raises(ValueError):
        PropagationConfig(splitting_order="yoshida")


def test_final_plateau():
    series = np.concatenate((np.linspace(0, 1, 90), np.full(10, 0.5)))
    assert final_plateau(series) == 0.0


def test_default_start_is_decoupled():
    start = ParaxialConfig().z_at(PropagationConfig().t_start)
    assert CHANNEL.asymptotic_separation - separation(start, CHANNEL) < 1e-6


def test_free_gaussian_matches_closed_form():
    # ω̃ = 3 gives σ0 = √(ħ̃/2ω̃) = 1
    grid = Grid1D.symmetric(512, 16.0)
    packet = gaussian_packet(grid, 0.0, 3.0, HBAR)
    cfg = PropagationConfig(dt=2e-4, t_start=0.0, t_end=0.2, snapshot_stride=1000, series_stride=1000)
    result = propagate_static(packet, StaticPotential(np.zeros(grid.n_points)), cfg, verbose=False)
    alpha = HBAR * 0.2 / 2.0
    x = grid.x
    exact = (2 * np.pi) ** -0.25 / np.sqrt(1 + 1j * alpha) * np.exp(-x**2 / (4 * (1 + 1j * alpha)))
    assert np.max(np.abs(result.final.amplitudes - exact)) < 1e-4


def test_harmonic_ground_state_is_stationary():
    grid = Grid1D.symmetric()
    ground = gaussian_packet(grid, 0.0, 30.0, HBAR)
    well = StaticPotential(0.5 * 30.0**2 * grid.x**2, omega=30.0)
    cfg = PropagationConfig(t_start=0.0, t_end=1.0, snapshot_stride=1000, series_stride=100)
    result = propagate_static(ground, well, cfg, verbose=False,
                              observable=lambda f: {"fidelity": abs(overlap(ground, f))})
    assert np.min(result.series["fidelity"]) > 1 - 1e-6


def test_step_error_estimate_scales_with_dt_squared(spectrum):
    grid = Grid1D.symmetric()
    moving = gaussian_packet(grid, 1.0, 30.0, HBAR, momentum=5.0)
    potential = StaticPotential(np.zeros(grid.n_points), omega=30.0)
    coarse = step_error_estimate(moving, potential, PropagationConfig(dt=2e-3))
    fine = step_error_estimate(moving, potential, PropagationConfig(dt=1e-3))
    assert coarse > 0
    assert fine / coarse == pytest.approx(0.25, rel=1e-9)
    assert step_error_estimate(spectrum.psi_S, FrozenChannel(CHANNEL, grid), PropagationConfig()) < 1e-10


# Spectrum

def test_doublet_parity_and_orthogonality(spectrum):
    assert parity_defect(spectrum.psi_S, 1) < 1e-12
    assert parity_defect(spectrum.psi_A, -1) < 1e-12
    assert abs(overlap(spectrum.psi_S, spectrum.psi_A)) < 1e-10
    assert spectrum.E_A > spectrum.E_S
    assert max(eigen_residual(spectrum, CHANNEL).values()) < 1e-8
    assert spectrum.parities[:2] == (1, -1)
    assert coupling_time(spectrum) == pytest.approx(np.pi / (4 * spectrum.omega_split))


def test_localized_states_sit_in_their_valleys(spectrum):
    phi_L, phi_R = localized_states(spectrum)
    assert probability_left_right(phi_L)["P_left"] > 0.9
    assert probability_left_right(phi_R)["P_right"] > 0.9
    assert abs(overlap(phi_L, phi_R)) < 1e-10


def test_imaginary_time_matches_eigensolver():
    grid = Grid1D.symmetric(512, 8.0)
    spectrum = solve_double_well(CHANNEL, HBAR, grid=grid)
    ground = imaginary_time_ground_state(CHANNEL, grid, HBAR)
    assert abs(overlap(ground, spectrum.psi_S)) > 1 - 1e-6


def test_bell_basis_is_orthonormal(spectrum):
    basis = bell_basis(*localized_states(spectrum))
    states = basis.states
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            assert abs(overlap(a, b) - (1.0 if i == j else 0.0)) < 1e-9


def test_repulsive_mean_interaction_is_positive(spectrum):
    basis = bell_basis(*localized_states(spectrum))
    assert mean_interaction(basis, COULOMB) > 0
    assert gaussian_mean_interaction(CHANNEL, HBAR, COULOMB) > 0


def test_mean_interaction_is_linear_in_strength(spectrum):
    basis = bell_basis(*localized_states(spectrum))
    v50 = mean_interaction(basis, COULOMB)
    assert mean_interaction(basis, COULOMB.with_strength(100.0)) == pytest.approx(2 * v50, rel=1e-12)
    assert mean_interaction(basis, COULOMB.with_strength(-50.0)) == pytest.approx(-v50, rel=1e-12)
    exact, gaussian = unit_mean_interaction(spectrum, CHANNEL, COULOMB)
    assert 50.0 * exact == pytest.approx(v50, rel=1e-12)
    assert gaussian == pytest.approx(exact, rel=0.15)


def test_exchange_pair_elements_nearly_equal(spectrum):
    m1, _, _, m4 = diagonal_elements(bell_basis(*localized_states(spectrum)), COULOMB)
    assert m1 == pytest.approx(m4, rel=1e-2)


def test_tunneling_frequency_falls_with_separation():
    omegas = [solve_double_well(ChannelPotential(d0=d0), HBAR).omega_split for d0 in (1.5, 1.8903, 2.2, 2.6)]
    assert all(a > b for a, b in zip(omegas, omegas[1:]))


def test_distant_grooves_are_two_harmonic_wells():
    far = solve_double_well(ChannelPotential(d0=20.0), HBAR, grid=Grid1D.symmetric(1024, 16.0))
    # ħ̃ω̃/2 = 90
    assert far.E_S == pytest.approx(90.0, rel=0.01)
    assert far.E_A == pytest.approx(90.0, rel=0.01)
    assert abs(far.splitting) < 1e-6


# Analytic models

def test_permanent_against_permutation_sum():
    rng = np.random.default_rng(7)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    brute = sum(np.prod([m[i, p[i]] for i in range(4)]) for p in itertools.permutations(range(4)))
    assert permanent(m) == pytest.approx(brute, rel=1e-12)


def test_ideal_splitter_statistics():
    bosons = beamsplitter_statistics("boson")
    fermions = beamsplitter_statistics("fermion")
    assert bosons["both_in_a"] == pytest.approx(0.5)
    assert bosons["both_in_b"] == pytest.approx(0.5)
    assert bosons["one_each"] == pytest.approx(0.0, abs=1e-15)
    assert fermions["one_each"] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        beamsplitter_statistics("anyon")


def test_bell_evolution_matches_matrix_exponential():
    rng = np.random.default_rng(11)
    for _ in range(5):
        omega, v_bar, e_bar, t = rng.uniform(0.1, 2.0), rng.uniform(-20, 20), rng.uniform(-5, 5), rng.uniform(0, 3)
        start = BellState4.from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
        exact = expm(-1j * bell_hamiltonian(omega, v_bar, HBAR, e_bar) * t / HBAR) @ start.vector
        closed = bell4_evolve(start, t, omega, v_bar, HBAR, e_bar).vector
        np.testing.assert_allclose(closed, exact, atol=1e-10)


def test_bell_populations_periodic_and_u4_conserved():
    rng = np.random.default_rng(3)
    for _ in range(5):
        omega, v_bar = rng.uniform(0.1, 2.0), rng.uniform(-20, 20)
        start = BellState4.from_vector(rng.normal(size=4) + 1j * rng.normal(size=4))
        period = 2 * np.pi / (2 * omega_eff(omega, v_bar, HBAR))
        later = bell4_evolve(start, period, omega, v_bar, HBAR)
        np.testing.assert_allclose(later.populations(), start.populations(), atol=1e-10)
        midway = bell4_evolve(start, 0.37 * period, omega, v_bar, HBAR)
        assert midway.populations()[3] == pytest.approx(start.populations()[3], abs=1e-12)


def test_quarter_pulse_transfers_u1_to_u2():
    omega = 0.8
    final = bell4_evolve(BellState4.basis(1), np.pi / (4 * omega), omega, 0.0, HBAR)
    assert final.populations()[1] == pytest.approx(1.0, abs=1e-12)
    assert analytic_universality_point(0.0) == pytest.approx(1.0, abs=1e-12)
    assert analytic_universality_point(np.sqrt(3.0) * 8.0) == pytest.approx(0.0, abs=1e-12)
    assert analytic_universality_point(1.7 * 8.0) < 0.1
    assert detuned_max_transfer(omega, 0.0, HBAR) == pytest.approx(1.0)


def test_bell_state_must_be_normalised():
    with pytest.raises(ValueError):
        BellState4((1.0, 1.0, 0.0, 0.0))


def test_two_level_evolution_flips_at_quarter_period():
    omega = 0.7
    left, right = two_level_evolution(np.pi / (2 * omega), omega)
    assert abs(left) ** 2 == pytest.approx(0.0, abs=1e-15)
    assert abs(right) ** 2 == pytest.approx(1.0)
    left, right = two_level_evolution(0.3, omega)
    assert abs(left) ** 2 + abs(right) ** 2 == pytest.approx(1.0)


# Two particles

def test_initial_states_have_exchange_symmetry():
    boson = build_initial("boson", CHANNEL, HBAR)
    fermion = build_initial("fermion", CHANNEL, HBAR)
    np.testing.assert_allclose(boson.field.amplitudes, boson.field.amplitudes.T, atol=1e-14)
    np.testing.assert_allclose(fermion.field.amplitudes, -fermion.field.amplitudes.T, atol=1e-14)
    assert quadrant_probabilities(boson.field)["P_diff"] > 0.999
    with pytest.raises(ValueError):
        build_initial("anyon", CHANNEL, HBAR)


def test_degenerate_fermion_state_rejected():
    with pytest.raises(DegenerateStateError):
        build_initial("fermion", CHANNEL, HBAR, min_norm=3.0)


def test_two_particle_state_validates_parity():
    grid2 = Grid2D.square(Grid1D.symmetric(64))
    psi = np.zeros(grid2.shape)
    psi[10, 20] = 1.0
    field = WaveField(grid2, psi).normalized()
    with pytest.raises(ValueError):
        TwoParticleState("boson", field)


def test_short_interacting_run_keeps_parity_and_norm():
    grid = Grid1D.symmetric(64)
    cfg = PropagationConfig(t_start=-0.1, t_end=0.1)
    for statistics in ("boson", "fermion"):
        state = build_initial(statistics, CHANNEL, HBAR, cfg.t_start, grid)
        result = run_statistics_experiment(state, CHANNEL, COULOMB, ParaxialConfig(), cfg, verbose=False)
        assert result.checks["exchange_parity_kept"]
        assert result.checks["norm_conserved"]
        assert result.checks["probabilities_complete"]


def test_abscissa_grid_spans_requested_range():
    v0 = abscissa_v0_grid(v_bar_unit=0.5, two_hbar_omega=8.0, points=6, max_abscissa=3.0)
    assert v0[0] == 0.0
    assert len(v0) == 6
    assert v0[-1] * 0.5 / 8.0 == pytest.approx(3.0)
    with pytest.raises(ValueError):
        abscissa_v0_grid(0.0, 8.0)


def test_crossing_and_plateau_helpers():
    t = np.linspace(0, 1, 11)
    p_same = np.linspace(0, 1, 11)
    assert first_crossing_time(t, p_same, 1 - p_same) == pytest.approx(0.5)
    assert first_crossing_time(t, np.zeros(11), np.ones(11)) is None
    assert plateau_flag(np.full(20, 0.3))
    assert not plateau_flag(np.linspace(0, 1, 20))


def test_sign_symmetry_defect():
    rows = [
        {"kind": "coulomb", "epsilon": 1.0, "V0": 50.0, "P_same": 0.52},
        {"kind": "coulomb", "epsilon": 1.0, "V0": -50.0, "P_same": 0.50},
        {"kind": "coulomb", "epsilon": 1.0, "V0": 0.0, "P_same": 0.99},
        {"kind": "lennard_jones", "epsilon": 0.2, "b": 0.25, "V0": 50.0, "P_same": 0.40},
        {"kind": "lennard_jones", "epsilon": 0.2, "b": 0.5, "V0": -50.0, "P_same": 0.10},
    ]
    assert sign_symmetry_defect(rows) == pytest.approx(0.02)


def test_sweep_rows_sorted_by_strength(spectrum):
    grid = Grid1D.symmetric(64)
    cfg = PropagationConfig(t_start=-0.1, t_end=0.1)
    rows = interaction_sweep("boson", COULOMB, [10.0, 0.0], CHANNEL, ParaxialConfig(), cfg,
                             grid=grid, spectrum=spectrum, workers=1, verbose=False)
    assert [r["V0"] for r in rows] == [0.0, 10.0]
    assert all(not r["status"].startswith("failed") for r in rows)
    assert rows[0]["abscissa"] == 0.0


def test_boson_and_fermion_inputs_share_a_density():
    boson = build_initial("boson", CHANNEL, HBAR)
    fermion = build_initial("fermion", CHANNEL, HBAR)
    assert np.max(np.abs(boson.field.density() - fermion.field.density())) < 1e-6


def test_paired_leakage_identity(spectrum):
    leak = paired_leakage(spectrum)
    assert leak["P_same"] == pytest.approx(2 * leak["delta"] * (1 - leak["delta"]), abs=1e-9)
    assert leak["P_same"] > 0.01


def test_transfer_peak_time():
    t = np.linspace(0, 1, 11)
    assert transfer_peak_time(t, np.sin(np.pi * t)) == pytest.approx(0.5)


# Run configuration and artifacts

def test_config_emit_parse_identity():
    for name in ("fig6", "fig9", "fig12"):
        cfg = RunConfig.for_recipe(name)
        assert parse(emit(cfg)) == cfg


def test_config_marks_artifact_defaults():
    text = emit(RunConfig())
    lines = {line.strip().split(":")[0]: line for line in text.splitlines()}
    assert lines["points"].endswith("# artifact default")
    assert "artifact" not in lines["hbar"]
    changed = emit(RunConfig().with_overrides({"grid.points": 512})).splitlines()
    assert "  points: 512" in changed


def test_config_validation_lists_every_field():
    with pytest.raises(ValidationError) as info:
        parse("numerics:\n  dt: -0.001\ngrid:\n  points: 100\n")
    assert info.value.error_count() >= 2
    with pytest.raises(ValidationError):
        RunConfig().with_overrides({"numerics.t_end": -20.0})


def test_recipe_presets():
    assert RunConfig.for_recipe("fig9").statistics == "fermion"
    assert RunConfig.for_recipe("fig2").channel.eta == 1.0
    assert RunConfig.for_recipe("fig12").interaction.kind == "lennard_jones"


def test_run_id_tracks_configuration():
    base = RunConfig()
    assert make_run_id(base) == make_run_id(RunConfig())
    assert make_run_id(base) != make_run_id(base.with_overrides({"numerics.dt": 5e-4}))


def test_exporter_writes_rows_and_manifest(tmp_path):
    cfg = RunConfig(output_dir=tmp_path)
    exporter = ResultExporter(cfg, verbose=False)
    path = exporter.write_rows("table", [{"a": 0.1, "b": True}], ["a", "b"])
    assert read_rows(path) == [{"a": "0.1", "b": "true"}]
    manifest = exporter.write_manifest({"ok": True}, {}, {"value": float("nan")})
    assert '"value": null' in manifest.read_text(encoding="utf-8")


def test_fit_log_tunneling_recovers_slope():
    rows = [{"d0_squared": x, "T": float(np.exp(-2.0 * x + 1.0)), "status": "ok"}
            for x in np.linspace(3.5, 6.0, 6)]
    fit = fit_log_tunneling(rows, (3.5, 6.0))
    assert fit["kappa_prime"] == pytest.approx(2.0)
    assert fit["r_squared"] == pytest.approx(1.0)


def test_unknown_recipe_lists_valid_names():
    with pytest.raises(UnknownRecipeError) as info:
        ExperimentRunner(RunConfig(experiment="fig99"))
    assert all(name in str(info.value) for name in RECIPES)


def test_frozen_flip_follows_two_level_model(spectrum):
    rows = frozen_flip(spectrum, CHANNEL, PropagationConfig(), verbose=False)
    gaps = [abs(r["P_R"] - r["P_R_two_level"]) for r in rows]
    assert max(gaps) < 0.01
    assert rows[-1]["P_R"] > 0.99
    assert rows[-1]["P_R_two_level"] == pytest.approx(1.0, abs=1e-6)


def test_eigenpair_recipe(tmp_path):
    outcome = run_experiment(RunConfig.for_recipe("fig3", output_dir=tmp_path), verbose=False)
    assert outcome.passed
    assert (outcome.run_dir / "eigenpair.csv").exists()
    assert (outcome.run_dir / "manifest.json").exists()
    assert (outcome.run_dir / "report.md").exists()
    assert (outcome.run_dir / "flip.csv").exists()
    assert outcome.checks["flip_matches_two_level"]


def test_potential_recipe(tmp_path):
    outcome = run_experiment(RunConfig.for_recipe("fig2", output_dir=tmp_path), verbose=False)
    assert outcome.passed
    rows = read_rows(outcome.run_dir / "cross_sections.csv")
    assert set(rows[0]) == {"z", "U_x0", "U_x2.5"}


def test_cli_exit_codes(tmp_path):
    assert cli_main(["units", "--preset", "electron"]) == 0
    assert cli_main(["run", "fig99"]) == 2
    assert cli_main(["run", "fig3", "--points", "100", "--output-dir", str(tmp_path)]) == 2
    assert cli_main(["run", "fig3", "--quiet", "--output-dir", str(tmp_path)]) == 0
    assert cli_main(["analytic", "--output-dir", str(tmp_path)]) == 0


def main():
    """Run all component tests and print a summary table."""
    print("Testing Groove Splitter Components")
    print("=" * 40)

    tests = [(name, func) for name, func in globals().items()
             if name.startswith("test_") and callable(func)]
    spectrum = solve_double_well(CHANNEL, HBAR, n_states=4)

    results = []
    with tempfile.TemporaryDirectory() as tmp:
        for name, test_func in tests:
            params = inspect.signature(test_func).parameters
            kwargs = {}
            if "tmp_path" in params:
                kwargs["tmp_path"] = Path(tmp) / name
                kwargs["tmp_path"].mkdir()
            if "spectrum" in params:
                kwargs["spectrum"] = spectrum
            try:
                test_func(**kwargs)
                results.append((name, True))
            except Exception as e:
                print(f"✗ {name}: {e}")
                results.append((name, False))

    # Summary
    print("\n" + "=" * 40)
    print("Test Summary:")
    print("=" * 40)

    for name, success in results:
        status = "✓ PASS" if success else "✗ FAIL"
        print(f"{name[5:]:.<50} {status}")

    total_passed = sum(1 for _, success in results if success)
    print(f"\nTotal: {total_passed}/{len(results)} passed")
    return 0 if total_passed == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
