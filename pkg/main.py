#!/usr/bin/env python3
"""Console entry point; see ``src/cli/main.py`` for the subcommands."""

import sys
from pathlib import Path

sys.path.append(str(Path(__file__).parent))

from src.cli.main import main


if __name__ == "__main__":
    sys.exit(main())
