"""Per-run configuration: one YAML file describing a complete experiment.

Values that no reference run fixes are written with an ``# artifact default``
marker so a reader can tell measured defaults from chosen ones.
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional
import sys

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

sys.path.append(str(Path(__file__).parent.parent.parent))
from src.config import (
    BASE_D0, BASE_DT, BASE_ETA, BASE_HBAR, BASE_OMEGA, BASE_P0, BASE_T_END, BASE_T_START,
    COULOMB_EPSILON, COULOMB_V0, GRID2D_Z_EXTENT, GRID2D_Z_POINTS, GRID_EXTENT, GRID_POINTS,
    LJ_EPSILON, LJ_RANGE_B, OUTPUT_DIR, PACKET_SIGMA_Z, SERIES_STRIDE, SNAPSHOT_STRIDE, SWEEP_WORKERS,
)
from src.pipeline.grid import Grid1D, Grid2D
from src.pipeline.potential import ChannelPotential, InteractionPotential
from src.pipeline.propagator import ParaxialConfig, PropagationConfig

ARTIFACT = {"artifact": True}


def _artifact(default: Any, **kwargs) -> Any:
    return Field(default, json_schema_extra=ARTIFACT, **kwargs)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ChannelSettings(_Section):
    omega: float = Field(BASE_OMEGA, gt=0)
    d0: float = Field(BASE_D0, gt=0)
    eta: float = Field(BASE_ETA, gt=0)

    def build(self) -> ChannelPotential:
        return ChannelPotential(omega=self.omega, d0=self.d0, eta=self.eta)


class NumericsSettings(_Section):
    hbar: float = Field(BASE_HBAR, gt=0)
    dt: float = Field(BASE_DT, gt=0)
    splitting_order: Literal["lie", "strang"] = _artifact("strang")
    p_z: float = Field(BASE_P0, gt=0)
    t_start: float = BASE_T_START
    t_end: float = BASE_T_END
    snapshot_stride: int = _artifact(SNAPSHOT_STRIDE, ge=1)
    series_stride: int = _artifact(SERIES_STRIDE, ge=1)
    frame_stride_2d: int = _artifact(2000, ge=1)

    @model_validator(mode="after")
    def _window(self) -> "NumericsSettings":
        if not self.t_end > self.t_start:
            raise ValueError(f"t_end ({self.t_end}) must exceed t_start ({self.t_start})")
        return self

    def propagation(self, frames_2d: bool = False) -> PropagationConfig:
        return PropagationConfig(
            dt=self.dt, t_start=self.t_start, t_end=self.t_end,
            splitting_order=self.splitting_order, hbar=self.hbar,
            snapshot_stride=self.frame_stride_2d if frames_2d else self.snapshot_stride,
            series_stride=self.series_stride,
        )

    def paraxial(self) -> ParaxialConfig:
        return ParaxialConfig(p0=self.p_z)


class GridSettings(_Section):
    points: int = _artifact(GRID_POINTS)
    extent: float = _artifact(GRID_EXTENT, gt=0)
    z_points: int = _artifact(GRID2D_Z_POINTS)
    z_extent: float = _artifact(GRID2D_Z_EXTENT, gt=0)
    sigma_z: float = _artifact(PACKET_SIGMA_Z, gt=0)

    @field_validator("points", "z_points")
    @classmethod
    def _power_of_two(cls, n: int) -> int:
        if n < 64 or n & (n - 1):
            raise ValueError(f"must be a power of two >= 64, got {n}")
        return n

    def transverse(self) -> Grid1D:
        return Grid1D.symmetric(self.points, self.extent)

    def longitudinal(self) -> Grid1D:
        return Grid1D.symmetric(self.z_points, self.z_extent)

    def plane(self) -> Grid2D:
        return Grid2D(self.transverse(), self.longitudinal())


class InteractionSettings(_Section):
    kind: Optional[Literal["coulomb", "lennard_jones"]] = None
    v0: float = COULOMB_V0
    epsilon: float = Field(COULOMB_EPSILON, gt=0)
    b: float = Field(LJ_RANGE_B, gt=0)

    def build(self) -> Optional[InteractionPotential]:
        if self.kind is None:
            return None
        return InteractionPotential(kind=self.kind, v0=self.v0, epsilon=self.epsilon, b=self.b)


class SweepSettings(_Section):
    points: int = _artifact(15, ge=2)
    max_abscissa: float = _artifact(3.0, gt=0)
    reduced: bool = False
    workers: int = _artifact(SWEEP_WORKERS, ge=1)
    v0_values: List[float] = _artifact([0.0, 10.0, 25.0, 50.0, 100.0, 200.0])
    d0_squared: List[float] = _artifact([round(float(v), 6) for v in np.linspace(1.0, 6.0, 21)])
    fit_range: List[float] = Field([3.5, 6.0], min_length=2, max_length=2)

    @property
    def effective_points(self) -> int:
        return 5 if self.reduced else self.points


class RunConfig(BaseModel):
    """Everything one experiment needs; every field is validated up front."""

    model_config = ConfigDict(extra="forbid")

    experiment: str = "fig6"
    statistics: Literal["boson", "fermion"] = "boson"
    channel: ChannelSettings = ChannelSettings()
    numerics: NumericsSettings = NumericsSettings()
    grid: GridSettings = GridSettings()
    interaction: InteractionSettings = InteractionSettings()
    sweep: SweepSettings = SweepSettings()
    output_dir: Path = _artifact(OUTPUT_DIR)

    @classmethod
    def for_recipe(cls, name: str, **overrides) -> "RunConfig":
        """Defaults of a named figure recipe, updated with ``overrides``."""
        base = RECIPE_PRESETS.get(name, {})
        return cls.model_validate(_deep_merge({"experiment": name, **base}, overrides))

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with dotted-key overrides, e.g. ``{"numerics.dt": 5e-4}``."""
        data = self.model_dump()
        for dotted, value in overrides.items():
            if value is None:
                continue
            *path, leaf = dotted.split(".")
            node = data
            for key in path:
                node = node[key]
            node[leaf] = value
        return RunConfig.model_validate(data)

    def resolved(self) -> Dict[str, Any]:
        """Plain-data view for manifests and run ids."""
        return self.model_dump(mode="json")


RECIPE_PRESETS: Dict[str, Dict[str, Any]] = {
    "fig2": {"channel": {"eta": 1.0}},
    "fig8": {"statistics": "boson"},
    "fig9": {"statistics": "fermion", "interaction": {"kind": "coulomb", "v0": COULOMB_V0}},
    "fig10": {"interaction": {"kind": "coulomb", "v0": COULOMB_V0, "epsilon": COULOMB_EPSILON}},
    "fig11": {"interaction": {"kind": "coulomb", "v0": COULOMB_V0, "epsilon": COULOMB_EPSILON}},
    "fig12": {
        "interaction": {"kind": "lennard_jones", "epsilon": LJ_EPSILON, "b": LJ_RANGE_B},
    },
}


def _deep_merge(base: Dict[str, Any], extra: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in extra.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def emit(cfg: RunConfig) -> str:
    """YAML text for ``cfg`` with artifact defaults marked inline."""
    return "\n".join(_emit_model(cfg, indent=0)) + "\n"


def _emit_model(model: BaseModel, indent: int) -> List[str]:
    lines = []
    pad = " " * indent
    data = model.model_dump(mode="json")
    for name, info in type(model).model_fields.items():
        value = getattr(model, name)
        if isinstance(value, BaseModel):
            lines.append(f"{pad}{name}:")
            lines.extend(_emit_model(value, indent + 2))
            continue
        text = yaml.safe_dump({name: data[name]}, default_flow_style=True, sort_keys=False, width=1000)
        line = pad + text.strip()[1:-1]
        extra = info.json_schema_extra or {}
        if extra.get("artifact") and value == info.default:
            line += "  # artifact default"
        lines.append(line)
    return lines


def parse(text: str) -> RunConfig:
    """Inverse of :func:`emit`; raises pydantic.ValidationError listing every bad field."""
    data = yaml.safe_load(text) or {}
    return RunConfig.model_validate(data)


def load(path: Path) -> RunConfig:
    return parse(Path(path).read_text(encoding="utf-8"))


def save(cfg: RunConfig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit(cfg), encoding="utf-8")
    return path
