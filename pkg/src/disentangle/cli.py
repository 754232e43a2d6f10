"""Command-line front end.

Every subcommand writes CSV: ``#``-prefixed lines with the full parameter
set, one header row, then data rows.  Numbers are printed with 12
significant digits so repeated runs are byte-identical.

Exit status: 0 on success, 1 on a domain error (or any failed sweep point /
validation check), 2 on a usage error (bad flags, invalid config values,
unreadable config or unwritable output).
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import os
import sys

import numpy as np

from . import kernel
from .errors import ConfigError, DisentangleError
from .experiments import (evolve_series, find_critical_temperature,
                          find_disentanglement_time, preset_state, spectral_table, sweep)
from .params import RunConfig, load_config_file, parse_overrides, serialize_config

CONFIG_ENV = "DISENTANGLE_CONFIG"
COMMANDS = ("spectrum", "kernel", "evolve", "sweep-temperature", "sweep-distance",
            "disentanglement-time", "critical-temperature", "validate")


def fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "pass" if x else "FAIL"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        x = 0.0  # drop the sign of negative zero
    return format(x, ".12g")


class CsvWriter:
    def __init__(self, command: str, config: RunConfig):
        self.buf = io.StringIO()
        self.buf.write(f"# command = {command}\n")
        for line in serialize_config(config).splitlines():
            self.buf.write(f"# {line}\n")

    def comment(self, text):
        self.buf.write(f"# {text}\n")

    def header(self, *cols):
        self.buf.write(",".join(cols) + "\n")

    def row(self, *values):
        self.buf.write(",".join(fmt(v) for v in values) + "\n")

    def getvalue(self):
        return self.buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disentangle",
        description="Two-qubit disentanglement under phonon-induced pure dephasing.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"config file (default: ${CONFIG_ENV})")
    common.add_argument("--out", help="output file (default: stdout)")
    for f in dataclasses.fields(RunConfig):
        common.add_argument("--" + f.name.replace("_", "-"), dest="cfg_" + f.name,
                            metavar=f.name.upper(), help=f"override config key {f.name}")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "evolve":
            p.add_argument("--states", action="store_true",
                           help="append the full density matrix (row-major re/im pairs)")
    return parser


def _config_from_args(args) -> RunConfig:
    path = args.config or os.environ.get(CONFIG_ENV)
    base = load_config_file(path) if path else RunConfig()
    raw = {f.name: getattr(args, "cfg_" + f.name) for f in dataclasses.fields(RunConfig)}
    overrides = parse_overrides({k: v for k, v in raw.items() if v is not None})
    return base.replace(**overrides)


def cmd_spectrum(cfg, out, args):
    table = spectral_table(cfg)
    out.header("omega_per_ps", "s_plus_ps", "s_minus_ps")
    for w, sp, sm in zip(table.omega, table.s_plus, table.s_minus):
        out.row(w, sp, sm)
    return 0


def cmd_kernel(cfg, out, args):
    table = spectral_table(cfg)
    out.header("t_ps", "a", "b", "a_inf", "b_inf", "phi_loc", "phi_bi")
    for k in kernel.evaluate_kernel(table, cfg.times(), cfg.temperature):
        out.row(k.t, k.a, k.b, k.a_inf, k.b_inf, k.phi_loc, k.phi_bi)
    return 0


def cmd_evolve(cfg, out, args):
    records = evolve_series(preset_state(cfg.state), cfg.times(), cfg,
                            keep_states=args.states)
    cols = ["t_ps", "a", "b", "concurrence", "eof"]
    if args.states:
        cols += [f"rho_{i}{j}_{part}" for i in range(4) for j in range(4) for part in ("re", "im")]
    out.header(*cols)
    for r in records:
        extra = []
        if args.states:
            for z in r.state.ravel():
                extra += [z.real, z.imag]
        out.row(r.t, r.a, r.b, r.concurrence, r.eof, *extra)
    return 0


def _cmd_sweep(axis, grid, cfg, out):
    records = sweep(axis, grid, preset_state(cfg.state), cfg)
    out.header("temperature_K" if axis == "temperature" else "d_nm",
               "asymptotic_eof", "t_d_ps", "error")
    for r in records:
        out.row(r.value, r.asymptotic_eof, r.t_d, r.error or "")
    return 0 if all(r.error is None for r in records) else 1


def cmd_sweep_temperature(cfg, out, args):
    return _cmd_sweep("temperature", cfg.temperature_grid(), cfg, out)


def cmd_sweep_distance(cfg, out, args):
    return _cmd_sweep("distance", cfg.distance_grid(), cfg, out)


def cmd_disentanglement_time(cfg, out, args):
    t_d = find_disentanglement_time(preset_state(cfg.state), cfg)
    out.header("state", "d_nm", "temperature_K", "t_d_ps")
    out.row(cfg.state, cfg.d, cfg.temperature, t_d)
    return 0


def cmd_critical_temperature(cfg, out, args):
    t_c = find_critical_temperature(preset_state(cfg.state), cfg.d, cfg,
                                    (cfg.temperature_min, cfg.temperature_max))
    out.header("state", "d_nm", "critical_temperature_K")
    out.row(cfg.state, cfg.d, t_c)
    return 0


def cmd_validate(cfg, out, args):
    from .validation import run_validation

    checks = run_validation(cfg)
    out.header("check", "achieved", "tolerance", "status")
    for c in checks:
        out.row(c.name, c.achieved, c.tolerance, c.passed)
    return 0 if all(c.passed for c in checks) else 1


HANDLERS = {
    "spectrum": cmd_spectrum,
    "kernel": cmd_kernel,
    "evolve": cmd_evolve,
    "sweep-temperature": cmd_sweep_temperature,
    "sweep-distance": cmd_sweep_distance,
    "disentanglement-time": cmd_disentanglement_time,
    "critical-temperature": cmd_critical_temperature,
    "validate": cmd_validate,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"disentangle: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"disentangle: error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        out = CsvWriter(args.command, cfg)
        status = HANDLERS[args.command](cfg, out, args)
    except DisentangleError as exc:
        print(f"disentangle: error: {exc}", file=sys.stderr)
        return 1
    text = out.getvalue()
    if args.out:
        try:
            with open(args.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            parser.print_usage(sys.stderr)
            print(f"disentangle: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return status


def main():
    sys.exit(run())
