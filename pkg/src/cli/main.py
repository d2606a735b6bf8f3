"""Command-line front-end for the groove beam-splitter simulations.

Every subcommand builds a :class:`RunConfig`, applies the flags given on
the command line as overrides, and exits 0 only when all embedded
numerical checks pass (2 on an invalid configuration).
"""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional
import sys

import numpy as np
from pydantic import ValidationError

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import CONFIG_DIR
from src.pipeline.analytic import beamsplitter_statistics, universality_rows
from src.pipeline.export import ResultExporter
from src.pipeline.grid import PacketFitError
from src.pipeline.propagator import BoundaryMassError
from src.pipeline.recipes import (
    RECIPES, TUNNELING_COLUMNS, UnknownRecipeError, fit_log_tunneling, paraxial_comparison_study,
    run_experiment, tunneling_curve,
)
from src.pipeline.run_config import RunConfig, load
from src.pipeline.scaling import PRESETS, ScaledUnits, conversion_table
from src.pipeline.spectrum import SpectrumError
from src.pipeline.twoparticle import SWEEP_COLUMNS, interaction_sweep

EXIT_OK, EXIT_CHECKS_FAILED, EXIT_INVALID = 0, 1, 2

# flag dest -> dotted RunConfig field
OVERRIDES = {
    "omega": "channel.omega",
    "d0": "channel.d0",
    "eta": "channel.eta",
    "hbar": "numerics.hbar",
    "dt": "numerics.dt",
    "splitting": "numerics.splitting_order",
    "p_z": "numerics.p_z",
    "t_start": "numerics.t_start",
    "t_end": "numerics.t_end",
    "points": "grid.points",
    "extent": "grid.extent",
    "sigma_z": "grid.sigma_z",
    "statistics": "statistics",
    "kind": "interaction.kind",
    "v0": "interaction.v0",
    "epsilon": "interaction.epsilon",
    "b": "interaction.b",
    "workers": "sweep.workers",
    "sweep_points": "sweep.points",
    "output_dir": "output_dir",
}


def _add_overrides(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("config overrides")
    group.add_argument("--omega", type=float, help="groove frequency ω̃")
    group.add_argument("--d0", type=float, help="minimum groove separation")
    group.add_argument("--eta", type=float, help="length of the coupling region")
    group.add_argument("--hbar", type=float, help="effective Planck constant ħ̃")
    group.add_argument("--dt", type=float, help="time step")
    group.add_argument("--splitting", choices=["lie", "strang"], help="operator splitting order")
    group.add_argument("--p-z", dest="p_z", type=float, help="longitudinal momentum p̃_z")
    group.add_argument("--t-start", dest="t_start", type=float)
    group.add_argument("--t-end", dest="t_end", type=float)
    group.add_argument("--points", type=int, help="transverse grid points (power of two)")
    group.add_argument("--extent", type=float, help="transverse half-width of the grid")
    group.add_argument("--sigma-z", dest="sigma_z", type=float, help="longitudinal packet width")
    group.add_argument("--statistics", choices=["boson", "fermion"])
    group.add_argument("--kind", choices=["coulomb", "lennard_jones"], help="interaction family")
    group.add_argument("--v0", type=float, help="interaction strength")
    group.add_argument("--epsilon", type=float, help="regularization length ε")
    group.add_argument("--b", type=float, help="Lennard-Jones range")
    group.add_argument("--workers", type=int, help="parallel sweep workers")
    group.add_argument("--sweep-points", dest="sweep_points", type=int, help="points per sweep family")
    group.add_argument("--output-dir", dest="output_dir", type=Path)
    parser.add_argument("--quiet", action="store_true", help="only print the final status")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groove-splitter",
        description="Wave packets through a two-groove quantum beam splitter",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    units = sub.add_parser("units", help="print the physical meaning of the scaled parameters")
    units.add_argument("--preset", choices=sorted(PRESETS), default="rb87")
    units.add_argument("--length", type=float, help="length scale ξ in meters")
    units.add_argument("--time", type=float, help="time scale τ in seconds")
    units.add_argument("--mass", type=float, help="particle mass in kilograms")
    units.add_argument("--omega", type=float, default=30.0)
    units.add_argument("--p-z", dest="p_z", type=float, default=30.0)

    run = sub.add_parser("run", help="run a figure recipe or a YAML config")
    run.add_argument("target", help=f"recipe ({', '.join(RECIPES)}) or path to a config file")
    _add_overrides(run)

    sweep = sub.add_parser("sweep", help="two-particle runs over interaction strengths")
    sweep.add_argument("--v0-values", dest="v0_values", type=float, nargs="+",
                       help="V0 grid (defaults to the config's sweep.v0_values)")
    sweep.add_argument("--mirror", action="store_true", help="add -V0 for every V0 in the grid")
    _add_overrides(sweep)

    tunneling = sub.add_parser("tunneling", help="tunneling probability against d0²")
    tunneling.add_argument("--d0-squared", dest="d0_squared", type=float, nargs="+")
    _add_overrides(tunneling)

    universality = sub.add_parser("universality", help="bunching loss against |V̄|/(2ħΩ)")
    universality.add_argument("--reduced", action="store_true", help="5 points per family")
    _add_overrides(universality)

    analytic = sub.add_parser("analytic", help="closed-form universality curve and splitter statistics")
    analytic.add_argument("--points", type=int, default=31)
    analytic.add_argument("--max-abscissa", dest="max_abscissa", type=float, default=3.0)
    analytic.add_argument("--two-hbar-omega", dest="two_hbar_omega", type=float, default=8.0)
    analytic.add_argument("--hbar", type=float, default=6.0)
    analytic.add_argument("--output-dir", dest="output_dir", type=Path)

    compare = sub.add_parser("compare-paraxial", help="full 2D run against the paraxial run")
    compare.add_argument("--sigmas", type=float, nargs="+", help="longitudinal widths to compare")
    compare.add_argument("--momenta", type=float, nargs="+", help="longitudinal momenta to compare")
    _add_overrides(compare)
    return parser


def config_from_args(args: argparse.Namespace, experiment: str, base: Optional[RunConfig] = None) -> RunConfig:
    """Recipe defaults (or ``base``) with every flag given on the command line applied."""
    cfg = base or RunConfig.for_recipe(experiment)
    overrides = {field: getattr(args, dest, None) for dest, field in OVERRIDES.items()}
    if getattr(args, "reduced", False):
        overrides["sweep.reduced"] = True
    if getattr(args, "d0_squared", None):
        overrides["sweep.d0_squared"] = args.d0_squared
    if getattr(args, "v0_values", None):
        overrides["sweep.v0_values"] = args.v0_values
    return cfg.with_overrides(overrides)


def _resolve_target(target: str) -> Optional[Path]:
    for candidate in (Path(target), CONFIG_DIR / target):
        if candidate.suffix in (".yaml", ".yml") and candidate.is_file():
            return candidate
    return None


def cmd_units(args: argparse.Namespace) -> int:
    preset = PRESETS[args.preset]
    units = ScaledUnits(
        length_scale=args.length or preset.length_scale,
        time_scale=args.time or preset.time_scale,
        mass=args.mass or preset.mass,
    )
    print("=" * 60)
    print(f"Scaled units ({args.preset} preset)")
    print("=" * 60)
    for key, value in conversion_table(units, omega=args.omega, p_z=args.p_z).items():
        print(f"  {key:26s} {value:.6g}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    path = _resolve_target(args.target)
    if path is not None:
        cfg = config_from_args(args, "", base=load(path))
    else:
        if args.target not in RECIPES:
            raise UnknownRecipeError(args.target)
        cfg = config_from_args(args, args.target)
    outcome = run_experiment(cfg, verbose=not args.quiet)
    return _finish(outcome.checks, outcome.run_dir)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = config_from_args(args, "sweep")
    family = cfg.interaction.build()
    if family is None:
        family = cfg.interaction.model_copy(update={"kind": "coulomb"}).build()
    v0_grid = list(cfg.sweep.v0_values)
    if args.mirror:
        v0_grid = sorted({*v0_grid, *(-v for v in v0_grid)})
    verbose = not args.quiet
    if verbose:
        print("=" * 60)
        print(f"Interaction sweep: {cfg.statistics}, {family.kind} ε={family.epsilon:g}")
        print("=" * 60)
    rows = interaction_sweep(
        cfg.statistics, family, v0_grid, cfg.channel.build(), cfg.numerics.paraxial(),
        cfg.numerics.propagation(), cfg.grid.transverse(), workers=cfg.sweep.workers, verbose=verbose,
    )
    exporter = ResultExporter(cfg, verbose=verbose)
    exporter.write_rows("sweep", rows, SWEEP_COLUMNS)
    checks = {"all_points_ran": all(not r["status"].startswith("failed") for r in rows),
              "all_points_clean": all(r["status"] == "ok" for r in rows)}
    exporter.write_config()
    exporter.write_manifest(checks, {}, {"points": len(rows)})
    return _finish(checks, exporter.run_dir)


def cmd_tunneling(args: argparse.Namespace) -> int:
    cfg = config_from_args(args, "fig7")
    verbose = not args.quiet
    if verbose:
        print("=" * 60)
        print("Tunneling curve")
        print("=" * 60)
    channel = cfg.channel.build()
    d0_values = [float(np.sqrt(v)) for v in cfg.sweep.d0_squared]
    rows = tunneling_curve(d0_values, channel, cfg.numerics.paraxial(), cfg.numerics.propagation(),
                           cfg.grid.transverse(), verbose)
    fit = fit_log_tunneling(rows, cfg.sweep.fit_range)
    exporter = ResultExporter(cfg, verbose=verbose)
    exporter.write_rows("tunneling", rows, TUNNELING_COLUMNS)
    checks = {"all_points_ran": all(not r["status"].startswith("failed") for r in rows)}
    exporter.write_config()
    exporter.write_manifest(checks, {"log_linear_tail": fit["r_squared"] > 0.95}, fit)
    if verbose:
        print(f"\n  κ′ = {fit['kappa_prime']:.4f}, R² = {fit['r_squared']:.4f} ({fit['n_points']} points)")
    return _finish(checks, exporter.run_dir)


def cmd_universality(args: argparse.Namespace) -> int:
    cfg = config_from_args(args, "fig13")
    outcome = run_experiment(cfg, verbose=not args.quiet)
    return _finish(outcome.checks, outcome.run_dir)


def cmd_analytic(args: argparse.Namespace) -> int:
    cfg = RunConfig.for_recipe("analytic").with_overrides({"output_dir": args.output_dir})
    exporter = ResultExporter(cfg)
    print("=" * 60)
    print("Analytic models")
    print("=" * 60)
    for kind in ("boson", "fermion"):
        dist = beamsplitter_statistics(kind)
        print(f"  {kind:8s}: " + ", ".join(f"{k}={v:.3f}" for k, v in dist.items()))
    abscissae = np.linspace(0.0, args.max_abscissa, args.points)
    rows = universality_rows(abscissae, args.two_hbar_omega, args.hbar)
    exporter.write_rows("universality_analytic", rows, ["abscissa", "V_bar", "P_same", "max_transfer"])
    return _finish({}, exporter.run_dir)


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = config_from_args(args, "compare-paraxial")
    verbose = not args.quiet
    if verbose:
        print("=" * 60)
        print("2D versus paraxial")
        print("=" * 60)
    study = paraxial_comparison_study(cfg, args.sigmas, args.momenta, verbose=verbose)
    exporter = ResultExporter(cfg, verbose=verbose)
    exporter.write_rows("comparison", study["rows"])
    exporter.write_config()
    exporter.write_manifest(study["checks"], study["targets"], {"rows": len(study["rows"])})
    exporter.render_report("compare_report.md.j2", {
        "channel": cfg.channel, "hbar": cfg.numerics.hbar,
        "rows": study["rows"], "checks": {**study["checks"], **study["targets"]},
    })
    return _finish(study["checks"], exporter.run_dir)


def _finish(checks: Dict[str, Any], run_dir: Optional[Path]) -> int:
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        print(f"✗ {len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_CHECKS_FAILED
    print(f"✓ Done. 📁 {run_dir}")
    return EXIT_OK


COMMANDS = {
    "units": cmd_units,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "tunneling": cmd_tunneling,
    "universality": cmd_universality,
    "analytic": cmd_analytic,
    "compare-paraxial": cmd_compare,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as e:
        print(f"✗ Invalid configuration ({e.error_count()} error(s)):")
        for err in e.errors():
            location = ".".join(str(part) for part in err["loc"]) or "<root>"
            print(f"  ✗ {location}: {err['msg']}")
        return EXIT_INVALID
    except UnknownRecipeError as e:
        print(f"✗ {e}")
        return EXIT_INVALID
    except (BoundaryMassError, PacketFitError, SpectrumError) as e:
        print(f"✗ {type(e).__name__}: {e}")
        return EXIT_CHECKS_FAILED


if __name__ == "__main__":
    sys.exit(main())
