"""Flat ``key = value`` scenario files.

One assignment per line, ``#`` starts a comment, unknown keys are rejected.
Omitted physical constants fall back to the Rb/superconducting-cavity values.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import model
from .errors import InvalidInputError


class ConfigError(InvalidInputError):
    """Malformed or invalid scenario file."""


@dataclass(frozen=True)
class Scenario:
    name: str
    omega0_rad_s: float = model.OMEGA0
    q_bare: float = model.Q_BARE
    r_m: float = model.MIRROR_RADIUS
    h_m: float = model.MIRROR_GAP
    a0_per_s: float = model.EINSTEIN_A
    nbar: float = 0.85
    t_start_us: float = 0.0
    t_end_us: float = 100.0
    n_points: int = 1001
    rel_tol: float = 1e-9
    tail_tol: float = model.DEFAULT_TAIL_TOL
    overlay: str | None = None

    def __post_init__(self) -> None:
        if not self.name or not self.name.strip():
            raise ConfigError("name must be non-empty")
        for key in ("omega0_rad_s", "q_bare", "r_m", "h_m", "a0_per_s"):
            value = getattr(self, key)
            if not (value > 0.0 and math.isfinite(value)):
                raise ConfigError(f"{key} must be positive, got {value!r}")
        if not (self.nbar >= 0.0 and math.isfinite(self.nbar)):
            raise ConfigError(f"nbar must be non-negative, got {self.nbar!r}")
        if self.n_points < 1:
            raise ConfigError(f"n_points must be at least 1, got {self.n_points!r}")
        if not (0.0 <= self.t_start_us and math.isfinite(self.t_end_us)):
            raise ConfigError("t_start_us must be non-negative and t_end_us finite")
        if self.n_points > 1 and not self.t_end_us > self.t_start_us:
            raise ConfigError(f"t_end_us ({self.t_end_us!r}) must exceed t_start_us ({self.t_start_us!r})")
        for key in ("rel_tol", "tail_tol"):
            if not 0.0 < getattr(self, key) < 1.0:
                raise ConfigError(f"{key} must lie in (0, 1), got {getattr(self, key)!r}")

    def system(self) -> model.ResonantSystem:
        return model.ResonantSystem(self.omega0_rad_s, self.q_bare, self.r_m, self.h_m, self.a0_per_s)

    def grid_us(self) -> np.ndarray:
        return np.linspace(self.t_start_us, self.t_end_us, self.n_points)

    def replace(self, **changes) -> Scenario:
        return Scenario(**{**asdict(self), **changes})


_TYPES = {f.name: f.type for f in fields(Scenario)}
KEYS = tuple(_TYPES)


def _convert(key: str, raw: str, where: str):
    if key in ("name", "overlay"):
        return raw
    try:
        if key == "n_points":
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {key} value {raw!r}") from None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    values: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        where = f"{source}:{lineno}"
        if "=" not in body:
            raise ConfigError(f"{where}: expected 'key = value', got {body!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        values[key] = _convert(key, raw, where)
    if "name" not in values:
        raise ConfigError(f"{source}: missing required key 'name'")
    try:
        return Scenario(**values)
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


def format_scenario(scenario: Scenario) -> str:
    lines = []
    for key in KEYS:
        value = getattr(scenario, key)
        if value is None:
            continue
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(format_scenario(scenario))
