"""
Experiment configuration.

Values are layered: dataclass defaults, then a flat key=value config file read with
dotenv_values, then CONVEX_<KEY> environment variables, then command-line flags.
"""
import math
from dataclasses import MISSING, dataclass, fields
from logging import debug
from os import environ as env
from typing import (Any, Dict, List, Mapping, Optional, Union, get_args, get_origin,
                    get_type_hints)

import numpy as np
from dotenv import dotenv_values

from bodies import parse_angle
from core import AngleInterval, ConfigError
from core.constants import ALPHA_MAX, ALPHA_MIN, TWO_PI

ENV_PREFIX = "CONVEX_"

FAMILIES = ("square", "rotated", "aniso", "compose", "compose-aniso", "random")
QUANTITIES = ("rotation", "dilation", "spherical", "weight")
DEFAULT_ZOO = "disc;square;hexagon;rect:1x3;C:phi=pi/2,alpha=2"


@dataclass
class ExperimentConfig:
    """Every knob of every subcommand; each field has a --flag and a CONVEX_<FIELD> variable."""
    kind: str = ""
    body: str = "disc"
    interval: str = "full"          # "full" or "start,length"
    quantity: str = "rotation"
    theta: float = 0.0              # ray direction for dilation and weight scans
    rho_min: float = 8.0
    rho_max: float = 256.0
    rho_count: int = 16
    lam_min: float = 1e-4
    lam_max: float = 1e-1
    lam_count: int = 7
    family: str = "square"
    n: int = 64
    n_min: int = 64
    n_max: int = 4096
    n_count: int = 6
    q1: int = 1
    q2: int = 2
    alpha: float = 2.0
    r_factor: float = 8.0           # truncation radius R = r_factor * sqrt(N)
    r_fixed: float = 0.0            # a positive value overrides r_factor
    rtol: float = 1e-2
    spot_checks: int = 50
    check_rtol: float = 0.01
    samples: int = 20000
    seed: int = 0
    sweep: int = 1000
    zoo: str = DEFAULT_ZOO
    h: Optional[float] = None       # secondary decay exponent, labels the expected slope
    expect: Optional[float] = None
    tolerance: float = 0.1
    input: str = ""
    x_column: str = "N"
    y_column: str = "D2"
    output: str = ""
    weights_cache: str = ""
    workers: int = 1
    timing: bool = False

    # --- derived values
    @property
    def angle_interval(self) -> AngleInterval:
        return parse_interval(self.interval)

    def rho_schedule(self) -> np.ndarray:
        return np.geomspace(self.rho_min, self.rho_max, self.rho_count)

    def lam_schedule(self) -> np.ndarray:
        """Decreasing depths, lam_max down to lam_min."""
        return np.geomspace(self.lam_max, self.lam_min, self.lam_count)

    def n_schedule(self) -> List[int]:
        values = np.rint(np.geomspace(self.n_min, self.n_max, self.n_count)).astype(int)
        return sorted(set(int(v) for v in values))

    def truncation_radius(self, N: int) -> float:
        if self.r_fixed > 0.0:
            return self.r_fixed
        return self.r_factor * math.sqrt(N)

    def validate(self) -> "ExperimentConfig":
        parse_interval(self.interval)
        for name in ("rho", "lam"):
            lo, hi, count = (getattr(self, f"{name}_{s}") for s in ("min", "max", "count"))
            if not 0.0 < lo <= hi or count < 1 or (count > 1 and lo == hi):
                raise ConfigError(f"{name} schedule must be nonempty and increasing: "
                                  f"min={lo}, max={hi}, count={count}")
        if not 1 <= self.n_min <= self.n_max or self.n_count < 1:
            raise ConfigError(f"N schedule must be nonempty and increasing: "
                              f"min={self.n_min}, max={self.n_max}, count={self.n_count}")
        for name in ("rtol", "check_rtol", "tolerance", "r_factor"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be positive")
        if self.n < 1 or self.workers < 1 or self.sweep < 1:
            raise ConfigError("n, workers and sweep must be positive")
        if self.samples < 0 or self.spot_checks < 0:
            raise ConfigError("samples and spot_checks must be nonnegative")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown point family {self.family!r}; "
                              f"known: {', '.join(FAMILIES)}")
        if self.quantity not in QUANTITIES:
            raise ConfigError(f"unknown quantity {self.quantity!r}; "
                              f"known: {', '.join(QUANTITIES)}")
        if math.gcd(self.q1, self.q2) != 1:
            raise ConfigError(f"q1={self.q1} and q2={self.q2} must be coprime")
        if not ALPHA_MIN <= self.alpha <= ALPHA_MAX:
            raise ConfigError(f"alpha must lie in [{ALPHA_MIN}, {ALPHA_MAX}], got {self.alpha}")
        if self.h is not None and not 0.0 <= self.h <= 1.0:
            raise ConfigError(f"h must lie in [0, 1], got {self.h}")
        return self


def _signed_angle(text: str) -> float:
    text = text.strip()
    if text.startswith("-"):
        return -parse_angle(text[1:])
    return parse_angle(text.lstrip("+"))


def parse_interval(text: str) -> AngleInterval:
    """`full` or `start,length` with angles such as `-pi/4,pi/2`."""
    if text.strip().lower() in ("full", "t2pi", ""):
        return AngleInterval(0.0, TWO_PI)
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"interval must be 'full' or 'start,length', got {text!r}")
    start, length = (_signed_angle(p) for p in parts)
    if not 0.0 <= length <= TWO_PI * (1 + 1e-12):
        raise ConfigError(f"interval length must lie in [0, 2 pi], got {length}")
    return AngleInterval(start, min(length, TWO_PI))


def _coerce(name: str, kind, raw) -> Any:
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    optional = get_origin(kind) is Union and type(None) in get_args(kind)
    if optional:
        if text.lower() in ("", "none", "null"):
            return None
        kind = next(a for a in get_args(kind) if a is not type(None))
    try:
        if kind is bool:
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off", ""):
                return False
            raise ValueError(text)
        if kind is int:
            return int(text)
        if kind is float:
            return _signed_angle(text)
    except (ValueError, ConfigError) as e:
        raise ConfigError(f"bad value for {name}: {raw!r}") from e
    return text


def config_keys() -> List[str]:
    return [f.name for f in fields(ExperimentConfig)]


def _normalized(values: Mapping[str, Optional[str]], source: str) -> Dict[str, Optional[str]]:
    known = set(config_keys())
    out = {}
    for key, value in values.items():
        name = key.strip().lower().replace("-", "_")
        if name not in known:
            raise ConfigError(f"unknown config key {key!r} in {source}")
        out[name] = value
    return out


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None,
                environ: Optional[Mapping[str, str]] = None) -> ExperimentConfig:
    """Layer file, environment and overrides over the defaults, then validate."""
    values: Dict[str, Any] = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                file_values = dotenv_values(stream=f)
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from e
        values.update(_normalized(file_values, path))
    environ = env if environ is None else environ
    for name in config_keys():
        key = ENV_PREFIX + name.upper()
        if key in environ:
            values[name] = environ[key]
    if overrides:
        values.update({k: v for k, v in _normalized(overrides, "flags").items() if v is not None})

    hints = get_type_hints(ExperimentConfig)
    coerced = {name: _coerce(name, hints[name], raw) for name, raw in values.items()
               if raw is not None}
    debug("config values: %s", coerced)
    return ExperimentConfig(**coerced).validate()


def field_defaults() -> Dict[str, Any]:
    return {f.name: f.default for f in fields(ExperimentConfig) if f.default is not MISSING}
