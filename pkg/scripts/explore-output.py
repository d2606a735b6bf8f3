#!/usr/bin/env python3
"""List run manifests with their checks and targets."""

import json
import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from src.config import OUTPUT_DIR
from src.pipeline.export import list_manifests


def main(root: Path = OUTPUT_DIR):
    print("🔍 Exploring run output")
    print("=" * 40)

    manifests = list(list_manifests(root))
    if not manifests:
        print("✗ No runs found; start one with: python main.py run fig6")
        return

    by_experiment = {}
    for path in manifests:
        manifest = json.loads(path.read_text(encoding="utf-8"))
        by_experiment.setdefault(manifest["experiment"], []).append(manifest)

    print("\n📊 Runs per experiment:")
    for experiment, runs in sorted(by_experiment.items()):
        print(f"  {experiment}: {len(runs)}")

    for experiment, runs in sorted(by_experiment.items()):
        for manifest in runs:
            checks = manifest.get("checks", {})
            passed = sum(bool(v) for v in checks.values())
            print(f"\n📄 {experiment} ({manifest['run_id']}, code {manifest['code_version']})")
            print(f"  ✓ {passed}/{len(checks)} checks")
            for name, ok in checks.items():
                if not ok:
                    print(f"  ✗ {name}")
            for name, met in manifest.get("targets", {}).items():
                print(f"  {'✓' if met else '⚠'} target {name}")
            for key, value in manifest.get("summary", {}).items():
                if isinstance(value, float):
                    print(f"  • {key}: {value:.6g}")
            print(f"  📁 {len(manifest.get('files', []))} files")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else OUTPUT_DIR)
