"""Run configuration shared by the command-line tools."""

import json
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .corpus import DEFAULT_SEED
from .disk_maps import EvaluationGrid


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Truncation, grid, tolerances, output directory and corpus seed."""

    N: int = 64
    grid_halvings: int = 6
    grid_substeps: int = 4
    grid_angles: int = 32
    norm_tol: float = 1e-6
    newton_tol: float = 1e-10
    fd_step: float = 1e-4
    out: str = "."
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 8:
            raise ConfigError(f"N must be an integer >= 8, got {self.N!r}")
        for name in ("norm_tol", "newton_tol", "fd_step"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not v > 0:
                raise ConfigError(f"{name} must be > 0, got {v!r}")
        for name in ("grid_halvings", "grid_substeps", "grid_angles"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")

    @property
    def grid(self):
        return EvaluationGrid(halvings=self.grid_halvings, substeps=self.grid_substeps,
                              n_angles=self.grid_angles)

    def updated(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def as_dict(self):
        return asdict(self)


def load_config(path):
    """Read a RunConfig from TOML or JSON; unknown keys are rejected."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        if path.suffix == ".toml":
            data = tomllib.loads(raw.decode())
        else:
            data = json.loads(raw)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a table of settings")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path}: unknown settings {unknown}")
    return RunConfig(**data)
