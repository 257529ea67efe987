"""Scenario configuration: line-based `section.key = value` text format.

`#` starts a comment; blank lines are ignored; unknown keys are errors so
typos cannot silently fall back to defaults.  An empty file yields the
default configuration, which is the rippled-bed reference scenario
(512x4 grid over 100x10, ripple height 0.4 / wavelength 20, 0.2-amplitude
depth perturbation, comprehensive model to t=180, probes at x=50 and 60).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .params import ModelParams
from .solver import DEFAULT_CFL, Grid

BED_TYPES = ("ripple", "flat")
INITIAL_TYPES = ("equilibrium_with_perturbation", "uniform")
MODEL_TYPES = ("full", "leading", "reference")


class ConfigError(ValueError):
    """Configuration parse or validation failure."""


@dataclass(frozen=True)
class BedConfig:
    type: str = "ripple"
    height: float = 0.4          # peak-to-trough
    wavelength: float = 20.0     # must divide Lx
    phase: float = math.pi / 2   # puts a trough at x=50 and a crest at x=60


@dataclass(frozen=True)
class InitialConfig:
    type: str = "equilibrium_with_perturbation"
    amplitude: float = 0.2       # depth perturbation about the unit mean depth
    # explicit uniform fields, used when type == "uniform"
    h: float = 1.0
    ubar: float = 0.0
    vbar: float = 0.0
    cbar: float = 0.0


@dataclass(frozen=True)
class RunSettings:
    type: str = "full"
    t_end: float = 180.0
    cfl: float = DEFAULT_CFL


@dataclass(frozen=True)
class OutputConfig:
    dir: str = "out"
    probes: tuple = (50.0, 60.0)
    snapshot_times: tuple = (180.0,)
    samples: int = 101           # Z samples in figure tables


@dataclass(frozen=True)
class ScenarioConfig:
    params: ModelParams = field(default_factory=ModelParams)
    grid: Grid = field(default_factory=Grid)
    bed: BedConfig = field(default_factory=BedConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    model: RunSettings = field(default_factory=RunSettings)
    output: OutputConfig = field(default_factory=OutputConfig)


def _float_tuple(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _choice(options):
    def convert(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}; got {text!r}")
        return text
    return convert


# key -> (section attr, field name, converter)
_SCHEMA = {
    "params.tan_theta": ("params", "tan_theta", float),
    "params.s": ("params", "s", float),
    "params.d": ("params", "d", float),
    "params.c_D": ("params", "c_D", float),
    "params.c_u": ("params", "c_u", float),
    "params.c_t": ("params", "c_t", float),
    "grid.nx": ("grid", "nx", int),
    "grid.ny": ("grid", "ny", int),
    "grid.Lx": ("grid", "Lx", float),
    "grid.Ly": ("grid", "Ly", float),
    "bed.type": ("bed", "type", _choice(BED_TYPES)),
    "bed.height": ("bed", "height", float),
    "bed.wavelength": ("bed", "wavelength", float),
    "bed.phase": ("bed", "phase", float),
    "initial.type": ("initial", "type", _choice(INITIAL_TYPES)),
    "initial.amplitude": ("initial", "amplitude", float),
    "initial.h": ("initial", "h", float),
    "initial.ubar": ("initial", "ubar", float),
    "initial.vbar": ("initial", "vbar", float),
    "initial.cbar": ("initial", "cbar", float),
    "model.type": ("model", "type", _choice(MODEL_TYPES)),
    "model.t_end": ("model", "t_end", float),
    "model.cfl": ("model", "cfl", float),
    "output.dir": ("output", "dir", str),
    "output.probes": ("output", "probes", _float_tuple),
    "output.snapshot_times": ("output", "snapshot_times", _float_tuple),
    "output.samples": ("output", "samples", int),
}


def wavelength_divides(Lx: float, wavelength: float) -> bool:
    ratio = Lx / wavelength
    return abs(ratio - round(ratio)) < 1e-9 * max(1.0, abs(ratio))


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    """Cross-field validation; ModelParams and Grid validate themselves."""
    if cfg.bed.height < 0:
        raise ConfigError(f"bed.height must be >= 0, got {cfg.bed.height}")
    if cfg.bed.type == "ripple":
        if cfg.bed.wavelength <= 0:
            raise ConfigError(f"bed.wavelength must be > 0, got {cfg.bed.wavelength}")
        if not wavelength_divides(cfg.grid.Lx, cfg.bed.wavelength):
            raise ConfigError(
                f"bed.wavelength = {cfg.bed.wavelength} does not divide "
                f"grid.Lx = {cfg.grid.Lx}, so the bed would not be periodic")
    if not -1.0 < cfg.initial.amplitude < 1.0:
        raise ConfigError(
            f"initial.amplitude must lie in (-1, 1) to keep the depth "
            f"positive, got {cfg.initial.amplitude}")
    if cfg.initial.type == "uniform" and cfg.initial.h <= 0:
        raise ConfigError(f"initial.h must be > 0, got {cfg.initial.h}")
    if cfg.model.t_end <= 0:
        raise ConfigError(f"model.t_end must be > 0, got {cfg.model.t_end}")
    if not 0 < cfg.model.cfl <= 1:
        raise ConfigError(f"model.cfl must be in (0, 1], got {cfg.model.cfl}")
    for x in cfg.output.probes:
        if not 0 <= x < cfg.grid.Lx:
            raise ConfigError(
                f"output.probes entry {x} outside the domain [0, {cfg.grid.Lx})")
    for t in cfg.output.snapshot_times:
        if t <= 0:
            raise ConfigError(f"output.snapshot_times entry {t} must be > 0")
    if cfg.output.samples < 2:
        raise ConfigError(f"output.samples must be >= 2, got {cfg.output.samples}")
    return cfg


def parse_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    sections = {
        "params": {}, "grid": {}, "bed": {}, "initial": {}, "model": {}, "output": {},
    }
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        section, name, convert = _SCHEMA[key]
        try:
            sections[section][name] = convert(value)
        except ValueError as err:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {err}") from None

    try:
        cfg = ScenarioConfig(
            params=ModelParams(**sections["params"]),
            grid=Grid(**sections["grid"]),
            bed=BedConfig(**sections["bed"]),
            initial=InitialConfig(**sections["initial"]),
            model=RunSettings(**sections["model"]),
            output=OutputConfig(**sections["output"]),
        )
    except ValueError as err:
        raise ConfigError(f"{source}: {err}") from None
    return validate_config(cfg)


def parse_config(path) -> ScenarioConfig:
    """Parse and validate a scenario configuration file."""
    path = Path(path)
    return parse_config_text(path.read_text(), source=str(path))


def serialize_config(cfg: ScenarioConfig) -> str:
    """Canonical text form; parse_config_text round-trips it exactly."""
    lines = []
    for key, (section, name, convert) in _SCHEMA.items():
        value = getattr(getattr(cfg, section), name)
        if isinstance(value, tuple):
            text = ", ".join(repr(v) for v in value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
