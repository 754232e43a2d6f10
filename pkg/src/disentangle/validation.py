"""Oracle comparisons behind ``disentangle validate``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import kernel
from .channel import build_channel, choi_matrix, completeness_residue
from .experiments import preset_state, spectral_table
from .oracles import FewModeSpec, channel_prediction, few_mode_evolve, mc_exponent
from .params import RunConfig

MC_TIMES = (0.5, 2.0, 10.0)
MC_TEMPERATURES = (0.0, 40.0, 100.0)
MC_DISTANCES = (0.0, 6.0)
MC_REL_TOL = 0.01
FEW_MODE_TOL = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    achieved: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.achieved <= self.tolerance)


def point_seeds(seed: int, n: int) -> list[int]:
    """Independent per-point seeds derived deterministically from a base seed."""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(n)]


def mc_checks(config: RunConfig, n_samples: int | None = None) -> list[Check]:
    n_samples = n_samples or config.n_samples
    points = list(itertools.product(MC_DISTANCES, MC_TEMPERATURES, MC_TIMES))
    seeds = point_seeds(config.seed, len(points))
    checks = []
    for (d, temp, t), seed in zip(points, seeds):
        table = spectral_table(config, d)
        geometry = config.geometry.with_distance(d)
        estimates = mc_exponent(t, temp, config.material, geometry, n_samples, seed)
        for branch, est in zip(("plus", "minus"), estimates):
            quad = kernel.decoherence_exponent(table, branch, t, temp)
            tol = max(3 * est.std_error, MC_REL_TOL * abs(quad))
            checks.append(Check(f"mc_gamma_{branch}(t={t:g},T={temp:g},d={d:g})",
                                abs(quad - est.value), tol))
    return checks


def few_mode_specs() -> dict[str, FewModeSpec]:
    """Mode configurations used to validate the channel against exact evolution."""
    return {
        "one_mode_T0_d0": FewModeSpec.symmetric_pairs([1.5], [0.35], [0.0], 20),
        "three_modes_T0": FewModeSpec.symmetric_pairs(
            [1.1, 2.3], [0.3, 0.2], [0.6, 0.0], 10, eps1=0.4, eps2=0.7, delta_eps=0.3),
        "three_pairs_T40_d6": FewModeSpec.symmetric_pairs(
            [1.3, 2.1, 3.0], [0.3, 0.25, 0.2], [0.7, 1.4, 2.2], 80, temperature=40.0,
            eps1=0.4, eps2=0.9, delta_eps=0.25),
    }


FEW_MODE_METHODS = {"one_mode_T0_d0": "dense", "three_modes_T0": "dense",
                    "three_pairs_T40_d6": "factorized"}
FEW_MODE_TIMES = (0.4, 1.3, 3.7)


def few_mode_checks() -> list[Check]:
    checks = []
    for name, spec in few_mode_specs().items():
        for state in ("psi1", "psi2"):
            psi = preset_state(state)
            err = max(np.max(np.abs(few_mode_evolve(spec, psi, t, FEW_MODE_METHODS[name])
                                    - channel_prediction(spec, psi, t)))
                      for t in FEW_MODE_TIMES)
            checks.append(Check(f"few_mode_{name}_{state}", float(err), FEW_MODE_TOL))
    return checks


def channel_checks(seed: int, n: int = 100) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst_completeness = 0.0
    worst_psd = 0.0
    for _ in range(n):
        a, b = 1 - rng.random(2)  # (0, 1]
        ops = build_channel(a, b, *rng.uniform(-np.pi, np.pi, 2))
        worst_completeness = max(worst_completeness, completeness_residue(ops))
        worst_psd = max(worst_psd, -np.linalg.eigvalsh(choi_matrix(ops)).min())
    return [Check("kraus_completeness", worst_completeness, 1e-12),
            Check("choi_psd_violation", worst_psd, 1e-10)]


def run_validation(config: RunConfig) -> list[Check]:
    return channel_checks(config.seed) + mc_checks(config) + few_mode_checks()
