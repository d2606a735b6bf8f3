#!/usr/bin/env python3
"""Remove generated run directories from the output folder."""

import shutil
import sys
from pathlib import Path
sys.path.append(str(Path(__file__).parent.parent))

from src.config import OUTPUT_DIR
from src.pipeline.export import list_manifests


def clear_output(root: Path = OUTPUT_DIR):
    """Delete every run directory that carries a manifest."""
    print(f"🗑️  Clearing run output in {root}...")

    runs = [path.parent for path in list_manifests(root)]
    files = sum(1 for run in runs for item in run.rglob("*") if item.is_file())
    print(f"Found {len(runs)} runs with {files} files")

    if not runs:
        print("✓ Output was already empty")
        return

    try:
        for run in runs:
            shutil.rmtree(run)
        print("✓ All runs cleared")
    except OSError as e:
        print(f"✗ Error clearing output: {e}")
        raise


if __name__ == "__main__":
    clear_output(Path(sys.argv[1]) if len(sys.argv) > 1 else OUTPUT_DIR)
