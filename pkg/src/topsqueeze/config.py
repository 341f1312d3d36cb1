"""Experiment configuration: dataclasses, TOML loading and the resolved manifest.

Unknown keys are rejected everywhere; a typo in a physics parameter must not
silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


@dataclass
class GeometryConfig:
    site_count: int = 20
    defect_site: typing.Optional[int] = 10
    short_um: float = 7.0
    long_um: float = 9.0
    # explicit spacings override the short/long dimer pattern
    spacings_um: typing.Optional[list] = None
    length_mm: float = 35.0


@dataclass
class CouplingConfig:
    J_ref: float = 0.25
    kappa: float = 0.7
    l_ref: float = 7.0
    wavelength_scale: dict = field(
        default_factory=lambda: {"pump": 1.0, "signal": 1.2, "idler": 0.85}
    )


@dataclass
class SourceConfig:
    gamma: float = 0.001  # 1/(mm W)
    pump_power_w: float = 1.0
    pump_wavelength_nm: float = 780.0
    delta_n: float = 1e-4
    z_step_mm: float = 0.1
    fock_cutoff: int = 12


@dataclass
class DetectionConfig:
    eta_s: float = 0.1
    eta_i: float = 0.1
    dark_counts: float = 1e-4  # background clicks per gate


@dataclass
class CountingConfig:
    integration_time_s: float = 1.0
    trials: int = 20
    rep_rate_hz: float = 80e6


@dataclass
class AnalysisConfig:
    zero_window: float = 0.05  # fraction of J_strong
    ldos_broadening: float = 0.02  # fraction of J_strong
    k_samples: int = 512


@dataclass
class ExperimentConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    coupling: CouplingConfig = field(default_factory=CouplingConfig)
    source: SourceConfig = field(default_factory=SourceConfig)
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    counting: CountingConfig = field(default_factory=CountingConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    z_list: list = field(default_factory=lambda: [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0])
    ports: list = field(default_factory=lambda: [1, 10, 20])
    output_dir: str = "out"
    seed: int = 0
    workers: int = 1

    def validate(self):
        g = self.geometry
        if g.site_count < 2:
            raise ConfigError("geometry.site_count must be at least 2")
        if g.spacings_um is not None and len(g.spacings_um) != g.site_count - 1:
            raise ConfigError(
                f"geometry.spacings_um needs {g.site_count - 1} entries, got {len(g.spacings_um)}"
            )
        if not self.ports:
            raise ConfigError("ports must not be empty")
        for p in self.ports:
            if not 1 <= p <= g.site_count:
                raise ConfigError(f"port {p} outside 1..{g.site_count}")
        if not self.z_list:
            raise ConfigError("z_list must not be empty")
        if any(b <= a for a, b in zip(self.z_list, self.z_list[1:])):
            raise ConfigError("z_list must be strictly ascending")
        if self.z_list[0] <= 0:
            raise ConfigError("z_list entries must be positive")
        step = self.source.z_step_mm
        if step <= 0:
            raise ConfigError("source.z_step_mm must be positive")
        for z in self.z_list:
            if abs(z / step - round(z / step)) > 1e-9:
                raise ConfigError(f"z={z} mm is not a multiple of z_step_mm={step}")
        if self.source.gamma < 0 or self.source.pump_power_w <= 0:
            raise ConfigError("source.gamma must be >= 0 and pump_power_w > 0")
        for name in ("eta_s", "eta_i"):
            eta = getattr(self.detection, name)
            if not 0 < eta <= 1:
                raise ConfigError(f"detection.{name} must lie in (0, 1], got {eta}")
        if not 0 <= self.detection.dark_counts < 1:
            raise ConfigError("detection.dark_counts must lie in [0, 1)")
        if self.counting.trials < 1 or self.counting.integration_time_s <= 0:
            raise ConfigError("counting.trials must be >= 1 and integration_time_s > 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        for tag in ("pump", "signal", "idler"):
            if tag not in self.coupling.wavelength_scale:
                raise ConfigError(f"coupling.wavelength_scale is missing {tag!r}")
        return self


def _build(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where or 'config'} must be a table, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where or 'config'}: {', '.join(unknown)}")
    kwargs = {}
    for name, value in data.items():
        kind = hints[name]
        path = f"{where}.{name}" if where else name
        if dataclasses.is_dataclass(kind):
            kwargs[name] = _build(kind, value, path)
        else:
            kwargs[name] = _coerce(kind, value, path)
    return cls(**kwargs)


def _coerce(kind, value, path):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path} must be a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path} must be an integer, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path} must be a string, got {value!r}")
        return value
    if kind is list and not isinstance(value, list):
        raise ConfigError(f"{path} must be a list, got {value!r}")
    if kind is dict and not isinstance(value, dict):
        raise ConfigError(f"{path} must be a table, got {value!r}")
    return value


def config_from_dict(data):
    cfg = _build(ExperimentConfig, data, "")
    cfg.z_list = [float(z) for z in cfg.z_list]
    cfg.ports = [int(p) for p in cfg.ports]
    return cfg.validate()


def load_config(path=None):
    """Read a TOML config; ``None`` gives the calibrated defaults."""
    if path is None:
        return ExperimentConfig().validate()
    try:
        with open(Path(path), "rb") as fh:
            data = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from None
    return config_from_dict(data)


def manifest(config, extra=None):
    """Fully resolved configuration plus derived parameters, JSON-ready."""
    from . import __version__

    out = {"package_version": __version__, "config": dataclasses.asdict(config)}
    if extra:
        out["derived"] = extra
    return out
