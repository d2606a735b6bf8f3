"""Writing run artifacts: CSV tables, density frames, manifest and report."""

import csv
import hashlib
import json
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence
import sys

import numpy as np
from jinja2 import Environment, FileSystemLoader, StrictUndefined

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import OUTPUT_DIR, TEMPLATES_DIR
from src.pipeline.grid import Grid
from src.pipeline.propagator import PropagationResult
from src.pipeline.run_config import RunConfig, emit


def make_run_id(cfg: RunConfig) -> str:
    """Stable id for a resolved configuration."""
    payload = json.dumps(cfg.resolved(), sort_keys=True)
    return "run" + hashlib.sha1(payload.encode("utf-8")).hexdigest()[:12]


def code_version() -> str:
    try:
        return metadata.version("groove-splitter")
    except metadata.PackageNotFoundError:
        return "0.1.0+local"


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


class ResultExporter:
    """Writes every artifact of one run into ``<output>/<experiment>_<run id>/``."""

    def __init__(self, cfg: RunConfig, root: Optional[Path] = None, verbose: bool = True):
        self.cfg = cfg
        self.run_id = make_run_id(cfg)
        self.run_dir = Path(root or cfg.output_dir) / f"{cfg.experiment}_{self.run_id}"
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.verbose = verbose
        self.files: List[str] = []
        self._templates = Environment(
            loader=FileSystemLoader(str(TEMPLATES_DIR)),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
        )

    def _track(self, path: Path) -> Path:
        self.files.append(path.relative_to(self.run_dir).as_posix())
        if self.verbose:
            print(f"  📝 {path.relative_to(self.run_dir)}")
        return path

    def write_rows(self, name: str, rows: Sequence[Dict[str, Any]],
                   columns: Optional[Sequence[str]] = None) -> Path:
        """CSV table from a list of row dicts."""
        path = self.run_dir / f"{name}.csv"
        columns = list(columns or (rows[0].keys() if rows else []))
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=columns, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _format(row.get(k)) for k in columns})
        return self._track(path)

    def write_series(self, name: str, result: PropagationResult) -> Path:
        """(t, probabilities..., step_error) over the recorded steps."""
        keys = [k for k in result.series if k != "total"]
        rows = []
        for i, t in enumerate(result.times):
            row = {"t": t}
            row.update({k: result.series[k][i] for k in keys})
            row["step_error"] = result.error_estimates[i]
            rows.append(row)
        return self.write_rows(name, rows, ["t", *keys, "step_error"])

    def write_frames(self, name: str, result: PropagationResult, grid: Grid) -> List[Path]:
        """Numbered |ψ|² frames as CSV matrices, each with a JSON sidecar."""
        frame_dir = self.run_dir / name
        frame_dir.mkdir(exist_ok=True)
        paths = []
        for index, (t, density) in enumerate(result.snapshots):
            stem = frame_dir / f"frame_{index:04d}"
            np.savetxt(stem.with_suffix(".csv"), np.atleast_2d(density), delimiter=",", fmt="%.10e")
            sidecar = {"index": index, "t": float(t), "shape": list(np.shape(density)), **grid.extents()}
            stem.with_suffix(".json").write_text(json.dumps(_jsonable(sidecar), indent=2), encoding="utf-8")
            paths.append(stem.with_suffix(".csv"))
            self.files.append(stem.with_suffix(".csv").relative_to(self.run_dir).as_posix())
        if self.verbose:
            print(f"  🖼  {name}/ ({len(paths)} frames)")
        return paths

    def write_config(self) -> Path:
        path = self.run_dir / "config.yaml"
        path.write_text(emit(self.cfg), encoding="utf-8")
        return self._track(path)

    def write_manifest(self, checks: Dict[str, bool], targets: Dict[str, bool],
                       summary: Dict[str, Any]) -> Path:
        """Resolved parameters, code version, outputs and check outcomes."""
        manifest = {
            "run_id": self.run_id,
            "experiment": self.cfg.experiment,
            "code_version": code_version(),
            "config": self.cfg.resolved(),
            "checks": checks,
            "targets": targets,
            "summary": summary,
            "files": sorted(self.files),
        }
        path = self.run_dir / "manifest.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(_jsonable(manifest), f, indent=2, ensure_ascii=False)
        if self.verbose:
            print(f"  📋 manifest.json")
        return path

    def render_report(self, template: str, context: Dict[str, Any], name: str = "report.md") -> Path:
        """Markdown report rendered from a template in src/templates."""
        text = self._templates.get_template(template).render(
            run_id=self.run_id, experiment=self.cfg.experiment, **context,
        )
        path = self.run_dir / name
        path.write_text(text, encoding="utf-8")
        return self._track(path)


def _format(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.bool_, bool)):
        return str(bool(value)).lower()
    return value


def read_rows(path: Path) -> List[Dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def list_manifests(root: Path = OUTPUT_DIR) -> Iterable[Path]:
    return sorted(Path(root).glob("*/manifest.json"))
