#!/usr/bin/env python3
"""Write the symmetric/antisymmetric eigenpair CSV without any propagation."""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent.parent))

from src.pipeline.run_config import RunConfig
from src.pipeline.recipes import run_experiment


def main():
    """Run the eigenpair recipe on the configured channel."""
    print("📄 Eigenpair Export")
    print("=" * 40)

    outcome = run_experiment(RunConfig.for_recipe("fig3"), verbose=False)

    print(f"\n📁 Exported to: {outcome.run_dir}")
    for key in ("E_S", "E_A", "omega_split", "coupling_time"):
        print(f"  {key}: {outcome.summary[key]:.8g}")
    glyph = "✓" if outcome.passed else "✗"
    print(f"\n{glyph} {sum(outcome.checks.values())}/{len(outcome.checks)} checks passed")
    return 0 if outcome.passed else 1


if __name__ == "__main__":
    sys.exit(main())
