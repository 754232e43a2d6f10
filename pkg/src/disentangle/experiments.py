"""Time evolution, sweeps and root finders built on kernel + channel."""

from __future__ import annotations

import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernel
from .channel import TwoQubitState, apply_channel, build_channel
from .entanglement import concurrence, eof_from_concurrence
from .errors import (DisentangleError, InconclusiveError, InvalidParameterError,
                     UnsupportedConfigurationError)
from .params import DotGeometry, MaterialParams, RunConfig
from .spectral import SpectralTable, build_spectral_table

log = logging.getLogger(__name__)

ZERO_CONCURRENCE = 1e-9
SCAN_STEP = 0.05  # ps
TIME_RESOLUTION = 1e-3  # ps
TEMPERATURE_RESOLUTION = 0.1  # K

_PRESETS = {
    "psi1": np.array([1, 1, 1, -1], dtype=complex) / 2,
    "psi2": np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2),
}


def preset_state(name: str) -> np.ndarray:
    try:
        return _PRESETS[name].copy()
    except KeyError:
        raise InvalidParameterError(f"unknown preset state {name!r}; expected one of {sorted(_PRESETS)}") from None


@functools.lru_cache(maxsize=64)
def _cached_table(material: MaterialParams, geometry: DotGeometry, tol, grid_tol, t_ref):
    return build_spectral_table(material, geometry, tol=tol, grid_tol=grid_tol, t_ref=t_ref)


def spectral_table(config: RunConfig, d: float | None = None) -> SpectralTable:
    """Table for the config's material and geometry (optionally at another d), memoized."""
    geometry = config.geometry if d is None else config.geometry.with_distance(d)
    return _cached_table(config.material, geometry, config.angular_tol, config.grid_tol,
                         max(50.0, float(config.t_max)))


def _initial(state) -> TwoQubitState:
    if isinstance(state, TwoQubitState):
        return state
    if isinstance(state, str):
        state = preset_state(state)
    state = np.asarray(state, dtype=complex)
    if state.shape == (4,):
        return TwoQubitState.from_vector(state)
    return TwoQubitState(state)


@dataclass(frozen=True)
class EvolutionRecord:
    t: float
    a: float
    b: float
    concurrence: float
    eof: float
    state: np.ndarray | None = None


@dataclass(frozen=True)
class SweepRecord:
    value: float
    asymptotic_eof: float | None
    t_d: float | None = None
    error: str | None = None


def _concurrences(rho0: TwoQubitState, table, times, temperature, delta_e):
    a, b = kernel.amplitudes(table, times, temperature)
    phi_loc, phi_bi = kernel.phases(table, times, delta_e)
    out = []
    for i, t in enumerate(times):
        try:
            ops = build_channel(float(a[i]), float(b[i]), float(phi_loc[i]), float(phi_bi[i]))
            state = apply_channel(rho0, ops)
            out.append((float(a[i]), float(b[i]), state, concurrence(state)))
        except DisentangleError as exc:
            raise type(exc)(f"at t = {t} ps: {exc}") from exc
    return out


def evolve_series(initial, times, config: RunConfig, table: SpectralTable | None = None,
                  keep_states: bool = False) -> list[EvolutionRecord]:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size and (np.any(times < 0) or np.any(np.diff(times) <= 0)):
        raise InvalidParameterError("times must be non-negative and strictly increasing")
    rho0 = _initial(initial)
    table = table or spectral_table(config)
    records = []
    for t, (a, b, state, c) in zip(times, _concurrences(rho0, table, times, config.temperature,
                                                         config.delta_e)):
        records.append(EvolutionRecord(float(t), a, b, c, eof_from_concurrence(c),
                                       state.rho.copy() if keep_states else None))
    return records


def asymptotic_state(initial, config: RunConfig, table: SpectralTable | None = None,
                     temperature: float | None = None) -> TwoQubitState:
    if config.delta_e != 0:
        raise UnsupportedConfigurationError(
            "no long-time limit exists for delta_e != 0 (the evolution is cyclic)")
    table = table or spectral_table(config)
    temperature = config.temperature if temperature is None else temperature
    a_inf, b_inf = kernel.asymptotic_amplitudes(table, temperature)
    return apply_channel(_initial(initial), build_channel(a_inf, b_inf))


def asymptotic_concurrence(initial, config, table=None, temperature=None) -> float:
    return concurrence(asymptotic_state(initial, config, table, temperature))


def asymptotic_eof(initial, config: RunConfig, table: SpectralTable | None = None) -> float:
    return eof_from_concurrence(asymptotic_concurrence(initial, config, table))


def find_disentanglement_time(initial, config: RunConfig, t_max: float | None = None,
                              table: SpectralTable | None = None,
                              temperature: float | None = None) -> float | None:
    """Earliest t in (0, t_max] with concurrence <= 1e-9, or None.

    A coarse scan (step <= 0.05 ps) brackets the first zero, then bisection
    narrows it to 1e-3 ps.
    """
    if config.delta_e != 0:
        raise UnsupportedConfigurationError("disentanglement time requires delta_e = 0")
    t_max = config.t_max if t_max is None else float(t_max)
    if not t_max > 0:
        raise InvalidParameterError("t_max must be positive")
    temperature = config.temperature if temperature is None else temperature
    rho0 = _initial(initial)
    table = table or spectral_table(config)

    def conc(ts):
        return np.array([r[3] for r in _concurrences(rho0, table, ts, temperature, 0.0)])

    n = math.ceil(t_max / SCAN_STEP)
    grid = np.linspace(0.0, t_max, n + 1)
    values = conc(grid)
    hits = np.nonzero(values[1:] <= ZERO_CONCURRENCE)[0]
    if hits.size:
        hi = grid[hits[0] + 1]
        lo = grid[hits[0]]
        while hi - lo > TIME_RESOLUTION:
            mid = 0.5 * (lo + hi)
            if conc(np.array([mid]))[0] <= ZERO_CONCURRENCE:
                hi = mid
            else:
                lo = mid
        return float(hi)
    c_inf = asymptotic_concurrence(rho0, config, table, temperature)
    if c_inf > ZERO_CONCURRENCE:
        return None
    raise InconclusiveError(
        f"concurrence stays positive up to t_max = {t_max} ps but vanishes asymptotically; "
        "increase t_max")


def find_critical_temperature(initial, d: float, config: RunConfig,
                              t_range: tuple[float, float] = (0.0, 300.0),
                              table: SpectralTable | None = None) -> float | None:
    """Lowest temperature at which the asymptotic concurrence vanishes (to 0.1 K)."""
    if config.delta_e != 0:
        raise UnsupportedConfigurationError("critical temperature requires delta_e = 0")
    lo, hi = map(float, t_range)
    if not 0 <= lo < hi:
        raise InvalidParameterError("temperature range must satisfy 0 <= T_lo < T_hi")
    rho0 = _initial(initial)
    table = table or spectral_table(config, d)

    def separable(temp):
        return asymptotic_concurrence(rho0, config, table, temp) <= ZERO_CONCURRENCE

    if separable(lo):
        return lo
    if not separable(hi):
        log.info("no critical temperature in [%g, %g] K at d = %g nm: asymptotic "
                 "concurrence stays positive", lo, hi, d)
        return None
    while hi - lo > TEMPERATURE_RESOLUTION:
        mid = 0.5 * (lo + hi)
        if separable(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _sweep_point(axis, value, initial, config, t_max):
    try:
        if axis == "temperature":
            table = spectral_table(config)
            cfg = config.replace(temperature=float(value))
        else:
            table = spectral_table(config, value)
            cfg = config.replace(d=float(value))
        if cfg.delta_e != 0:
            raise UnsupportedConfigurationError("sweeps require delta_e = 0")
        eof = asymptotic_eof(initial, cfg, table)
        t_d = find_disentanglement_time(initial, cfg, t_max, table)
        return SweepRecord(float(value), eof, t_d)
    except DisentangleError as exc:
        return SweepRecord(float(value), None, None, f"{type(exc).__name__}: {exc}")


def sweep(axis: str, grid, initial, config: RunConfig, t_max: float | None = None,
          workers: int = 1) -> list[SweepRecord]:
    """One record per grid point, in grid order; failures are recorded, not raised."""
    if axis not in ("temperature", "distance"):
        raise InvalidParameterError(f"unknown sweep axis {axis!r}")
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(np.diff(grid) <= 0):
        raise InvalidParameterError("sweep grid must be strictly increasing")
    if axis == "temperature" and np.any(grid < 0):
        raise InvalidParameterError("temperatures must be non-negative")
    if axis == "distance" and np.any(grid < 0):
        raise InvalidParameterError("distances must be non-negative")
    initial = _initial(initial)
    task = functools.partial(_sweep_point, axis, initial=initial, config=config, t_max=t_max)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(task, grid))
    return [task(v) for v in grid]
