"""Run configuration read from JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidConfig, InvalidPotential
from .radial import DEFAULT_TOL, PotentialSpec

SCHEMA = 1


@dataclass(frozen=True, eq=False)
class RunConfig:
    potential: PotentialSpec
    n_max: int = 8
    tol: float = DEFAULT_TOL
    r_min: float = 0.05
    r_max: float = 0.95
    h: float = 1e-3
    n_radial: int = 64
    n_theta: int = 256
    output_dir: Path = Path("out")

    def __post_init__(self):
        if isinstance(self.n_max, bool) or not isinstance(self.n_max, int) or self.n_max < 0:
            raise InvalidConfig(f"n_max must be a non-negative integer, got {self.n_max!r}")
        if not 0 < self.tol < 1:
            raise InvalidConfig(f"tol must lie in (0, 1), got {self.tol!r}")
        R = self.potential.radius
        if not 0 < self.r_min < self.r_max <= R:
            raise InvalidConfig(f"grid needs 0 < r_min < r_max <= R = {R}")
        if not self.h > 0:
            raise InvalidConfig("grid spacing h must be positive")
        if self.n_radial < 1 or self.n_theta < 1:
            raise InvalidConfig("quadrature sizes must be positive")

    @property
    def radius(self) -> float:
        return self.potential.radius

    @classmethod
    def from_json(cls, obj: dict, base_dir: str | Path = ".") -> RunConfig:
        if not isinstance(obj, dict):
            raise InvalidConfig("config must be a JSON object")
        if obj.get("schema", SCHEMA) != SCHEMA:
            raise InvalidConfig(f"unsupported config schema {obj.get('schema')!r}")
        if "potential" not in obj:
            raise InvalidConfig("config has no 'potential'")
        potential = PotentialSpec.from_json(obj["potential"])
        grid = obj.get("grid", {})
        quad = obj.get("quad", {})
        out = Path(obj.get("output_dir", "out"))
        if not out.is_absolute():
            out = (Path(base_dir) / out).resolve()
        try:
            return cls(
                potential=potential,
                n_max=obj.get("n_max", 8),
                tol=float(obj.get("tol", DEFAULT_TOL)),
                r_min=float(grid.get("r_min", 0.05 * potential.radius)),
                r_max=float(grid.get("r_max", 0.95 * potential.radius)),
                h=float(grid.get("h", 1e-3)),
                n_radial=int(quad.get("n_radial", 64)),
                n_theta=int(quad.get("n_theta", 256)),
                output_dir=out,
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (InvalidConfig, InvalidPotential)):
                raise
            raise InvalidConfig(f"malformed config: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        path = Path(path)
        try:
            obj = json.loads(path.read_text())
        except OSError as exc:
            raise InvalidConfig(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InvalidConfig(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_json(obj, base_dir=path.parent)
