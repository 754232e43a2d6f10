"""Physical constants, material/geometry parameters and run configuration.

Internal units are nm, ps, meV and kelvin.  Frequencies are angular (1/ps)
and the quantum of action is carried explicitly as ``hbar`` in meV*ps.  The
only public input outside this system is the crystal mass density, which is
quoted in kg/m^3 and converted when a :class:`MaterialParams` is built.

The bosonic normalization volume never appears: the squared coupling of a
single mode scales as 1/V while the continuum measure sum_k -> V/(2 pi)^3
int d^3k scales as V, so only the product is ever formed.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import constants as _sc

from .errors import ConfigError, InvalidParameterError

_MEV = 1e-3 * _sc.e  # J


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _sc.hbar / _MEV * 1e12  # meV*ps
    k_boltzmann: float = _sc.k / _MEV  # meV/K

    def __post_init__(self):
        if not (self.hbar > 0 and self.k_boltzmann > 0):
            raise InvalidParameterError("physical constants must be positive")


CONSTANTS = PhysicalConstants()


def convert_mass_density(rho_si: float, constants: PhysicalConstants = CONSTANTS) -> float:
    """Convert a mass density from kg/m^3 to meV*ps^2/nm^5.

    kg/m^3 = J*s^2/m^5, so the factor is (1/meV) * (ps/s)^2 * (m/nm)^-5.
    ``constants`` is accepted for interface symmetry; the conversion uses
    only the elementary charge.
    """
    if not rho_si > 0:
        raise InvalidParameterError(f"mass density must be positive, got {rho_si!r}")
    return float(rho_si) / _MEV * 1e24 * 1e-45


@dataclass(frozen=True)
class MaterialParams:
    """Deformation-potential material constants in internal units."""

    sigma_e: float = 8000.0  # meV
    sigma_h: float = -1000.0  # meV
    sound_speed: float = 5.6  # nm/ps
    mass_density: float = convert_mass_density(5600.0)  # meV*ps^2/nm^5

    def __post_init__(self):
        if not self.sound_speed > 0:
            raise InvalidParameterError("sound_speed must be positive")
        if not self.mass_density > 0:
            raise InvalidParameterError("mass_density must be positive")

    @classmethod
    def from_si_density(cls, sigma_e, sigma_h, sound_speed, rho_si):
        return cls(sigma_e, sigma_h, sound_speed, convert_mass_density(rho_si))


@dataclass(frozen=True)
class DotGeometry:
    l_e: float = 4.4  # nm
    l_h: float = 3.6  # nm
    l_z: float = 1.0  # nm
    d: float = 6.0  # nm

    def __post_init__(self):
        for name in ("l_e", "l_h", "l_z"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive")
        if not self.d >= 0:
            raise InvalidParameterError("d must be non-negative")

    def with_distance(self, d: float) -> "DotGeometry":
        return dataclasses.replace(self, d=float(d))


STATES = ("psi1", "psi2")


@dataclass(frozen=True)
class RunConfig:
    """Flat run configuration; every field is a key of the config file.

    Defaults reproduce the GaAs parameter set.  ``mass_density`` is kept in
    kg/m^3 here so that serialization round-trips exactly.
    """

    temperature: float = 40.0  # K
    d: float = 6.0  # nm
    delta_e: float = 0.0  # 1/ps
    state: str = "psi1"
    sigma_e: float = 8000.0  # meV
    sigma_h: float = -1000.0  # meV
    sound_speed: float = 5.6  # nm/ps
    mass_density: float = 5600.0  # kg/m^3
    l_e: float = 4.4
    l_h: float = 3.6
    l_z: float = 1.0
    t_max: float = 20.0  # ps
    dt: float = 0.05  # ps
    temperature_min: float = 0.0
    temperature_max: float = 300.0
    temperature_step: float = 5.0
    d_min: float = 0.0
    d_max: float = 30.0
    d_step: float = 1.0
    angular_tol: float = 1e-12
    grid_tol: float = 1e-8
    seed: int = 0
    n_samples: int = 1_000_000

    def __post_init__(self):
        check = _validate_field
        check("temperature", self.temperature >= 0, "must be >= 0")
        check("d", self.d >= 0, "must be >= 0")
        check("delta_e", math.isfinite(self.delta_e), "must be finite")
        check("state", self.state in STATES, f"must be one of {STATES}")
        check("sound_speed", self.sound_speed > 0, "must be > 0")
        check("mass_density", self.mass_density > 0, "must be > 0")
        for name in ("l_e", "l_h", "l_z", "t_max", "dt", "temperature_step", "d_step"):
            check(name, getattr(self, name) > 0, "must be > 0")
        check("temperature_min", self.temperature_min >= 0, "must be >= 0")
        check("temperature_max", self.temperature_max >= self.temperature_min,
              "must be >= temperature_min")
        check("d_min", self.d_min >= 0, "must be >= 0")
        check("d_max", self.d_max >= self.d_min, "must be >= d_min")
        check("angular_tol", 0 < self.angular_tol <= 1e-4, "must lie in (0, 1e-4]")
        check("grid_tol", 0 < self.grid_tol <= 1e-4, "must lie in (0, 1e-4]")
        check("n_samples", self.n_samples >= 10_000, "must be >= 10000")

    @property
    def material(self) -> MaterialParams:
        return MaterialParams.from_si_density(
            self.sigma_e, self.sigma_h, self.sound_speed, self.mass_density)

    @property
    def geometry(self) -> DotGeometry:
        return DotGeometry(self.l_e, self.l_h, self.l_z, self.d)

    def times(self) -> np.ndarray:
        """Time grid 0, dt, 2 dt, ... up to and including t_max."""
        n = int(math.floor(self.t_max / self.dt + 1e-9))
        t = self.dt * np.arange(n + 1)
        if t[-1] < self.t_max - 1e-12:
            t = np.append(t, self.t_max)
        return t

    def temperature_grid(self) -> np.ndarray:
        return _range_grid(self.temperature_min, self.temperature_max, self.temperature_step)

    def distance_grid(self) -> np.ndarray:
        return _range_grid(self.d_min, self.d_max, self.d_step)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def _range_grid(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9))
    return lo + step * np.arange(n + 1)


def _validate_field(key, ok, message):
    if not ok:
        raise ConfigError(key, message)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELDS[key].type
    if kind == "str":
        return raw
    try:
        if kind == "int":
            return int(raw)
        value = float(raw)
    except ValueError:
        raise ConfigError(key, f"malformed number {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(key, f"non-finite value {raw!r}")
    return value


def parse_overrides(pairs: dict[str, str]) -> dict:
    """Coerce string values for known keys; unknown keys raise ConfigError."""
    out = {}
    for key, raw in pairs.items():
        if key not in _FIELDS:
            raise ConfigError(key, "unknown key")
        out[key] = _coerce(key, raw.strip())
    return out


def load_config(source: str, base: RunConfig | None = None) -> RunConfig:
    """Parse a flat ``key = value`` document with ``#`` comments."""
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in pairs:
            raise ConfigError(key, "duplicate key")
        pairs[key] = value
    values = parse_overrides(pairs)
    return dataclasses.replace(base or RunConfig(), **values)


def load_config_file(path: str | Path, base: RunConfig | None = None) -> RunConfig:
    return load_config(Path(path).read_text(), base)


def serialize_config(config: RunConfig) -> str:
    lines = []
    for name in _FIELDS:
        value = getattr(config, name)
        lines.append(f"{name} = {value!r}" if isinstance(value, float) else f"{name} = {value}")
    return "\n".join(lines) + "\n"
