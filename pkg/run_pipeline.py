#!/usr/bin/env python3
"""Run every figure recipe in order and summarise their checks."""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from src.config import OUTPUT_DIR
from src.pipeline.propagator import BoundaryMassError
from src.pipeline.recipes import RECIPES, run_experiment
from src.pipeline.run_config import RunConfig


STAGES = [
    ("Channel geometry", ["fig2", "fig3"]),
    ("Single particle", ["fig5", "fig6", "fig7"]),
    ("Full 2D run", ["fig4"]),
    ("Two particles", ["fig8", "fig9", "fig10", "fig11"]),
    ("Interaction sweeps", ["fig12", "fig13"]),
]


def main(reduced: bool = True) -> int:
    """Run the complete set of recipes; ``reduced`` keeps the sweeps at 5 points per family."""
    print("=" * 60)
    print("Groove Beam-Splitter Pipeline")
    print("=" * 60)

    outcomes = {}
    for number, (title, names) in enumerate(STAGES, 1):
        print(f"\n{number}. {title}...")
        for name in names:
            cfg = RunConfig.for_recipe(name, sweep={"reduced": reduced})
            try:
                outcomes[name] = run_experiment(cfg, verbose=False)
            except BoundaryMassError as e:
                print(f"  ✗ {name}: {e}")
                outcomes[name] = None
                continue
            outcome = outcomes[name]
            passed = sum(outcome.checks.values())
            glyph = "✓" if outcome.passed else "✗"
            print(f"  {glyph} {name}: {passed}/{len(outcome.checks)} checks - {RECIPES[name]}")
            for target, met in outcome.targets.items():
                if not met:
                    print(f"    ⚠ target missed: {target}")

    print("\n" + "=" * 60)
    print("Pipeline Complete!")
    print("=" * 60)
    failed = [name for name, o in outcomes.items() if o is None or not o.passed]
    for name, outcome in outcomes.items():
        if outcome is not None:
            print(f"  📄 {name}: {outcome.run_dir.name}")
    print(f"\n📁 Check the {OUTPUT_DIR} directory for exported files")
    if failed:
        print(f"\n✗ Recipes with failed checks: {', '.join(failed)}")
        return 1
    print("\n✓ Pipeline completed successfully!")
    return 0


if __name__ == "__main__":
    sys.exit(main(reduced="--full" not in sys.argv[1:]))
