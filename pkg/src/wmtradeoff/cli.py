"""Batch command-line front end.

Subcommands: verify, sweep-states, sweep-grid, cross-section,
reversal-fidelity. Flags override config-file keys, which override defaults.
Exit codes: 0 success, 1 configuration or I/O error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass

import numpy as np

from ._version import __version__
from .bench import NoiseModel
from .measurement import WeakMeasurement
from . import tables
from .sweeps import (
    corrupted_reversal_operator,
    cross_section,
    grid_sweep,
    reversal_fidelity_sweep,
    state_sweep,
    verify,
)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_VERIFY_FAIL = 2

SUBCOMMANDS = ("verify", "sweep-states", "sweep-grid", "cross-section", "reversal-fidelity")


class ConfigError(ValueError):
    """Configuration input that cannot be accepted."""


@dataclass(frozen=True)
class RunConfig:
    epsilon: float = 0.25
    eta: float = 0.75
    photons_per_setting: int = 100_000
    counts_per_basis: int = 10_000
    seed: int = 42
    pbs_leakage: float = 0.0
    detector_efficiency: float = 1.0
    grid_size: int = 16
    exact_mode: bool = False
    output_path: str | None = None
    output_format: str | None = None


def _parse_float(name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{name}: expected a number, got {text!r}") from None


def _parse_int(name: str, text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise ConfigError(f"{name}: expected an integer, got {text!r}") from None


def _parse_bool(name: str, text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise ConfigError(f"{name}: expected true/false, got {text!r}")


def _parse_format(name: str, text: str) -> str:
    lowered = text.strip().lower()
    if lowered in ("csv", "json"):
        return lowered
    raise ConfigError(f"{name}: expected csv or json, got {text!r}")


def _check_range(name: str, value, low, high, range_text: str, low_open: bool = False) -> None:
    ok = (value > low if low_open else value >= low) and value <= high
    if not ok:
        raise ConfigError(f"{name} must lie in {range_text}, got {value!r}")


# name -> (parse, validate)
_FIELD_SPECS = {
    "epsilon": (_parse_float, lambda v: _check_range("epsilon", v, 0.0, 1.0, "[0, 1]")),
    "eta": (_parse_float, lambda v: _check_range("eta", v, 0.0, 1.0, "[0, 1]")),
    "photons_per_setting": (
        _parse_int,
        lambda v: _check_range("photons_per_setting", v, 1, 2**63, "[1, inf)"),
    ),
    "counts_per_basis": (
        _parse_int,
        lambda v: _check_range("counts_per_basis", v, 100, 2**63, "[100, inf)"),
    ),
    "seed": (_parse_int, lambda v: _check_range("seed", v, 0, 2**64 - 1, "[0, 2^64)")),
    "pbs_leakage": (
        _parse_float,
        lambda v: _check_range("pbs_leakage", v, 0.0, 0.01, "[0, 0.01]"),
    ),
    "detector_efficiency": (
        _parse_float,
        lambda v: _check_range("detector_efficiency", v, 0.0, 1.0, "(0, 1]", low_open=True),
    ),
    "grid_size": (_parse_int, lambda v: _check_range("grid_size", v, 2, 2**31, "[2, inf)")),
    "exact_mode": (_parse_bool, lambda v: None),
    "output_path": (lambda name, text: text, lambda v: None),
    "output_format": (_parse_format, lambda v: None),
}


def _read_config_file(path: str) -> dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    pairs: dict[str, str] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _FIELD_SPECS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        pairs[key] = value
    return pairs


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); keep our contract
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="wmtradeoff", add_help=True)
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", default=None, help="plain key = value config file")
    parser.add_argument(
        "--mutate-reversal",
        action="store_true",
        help="debug hook: corrupt the reversal operator so verify must fail",
    )
    for name in _FIELD_SPECS:
        parser.add_argument("--" + name.replace("_", "-"), default=None, dest=name)
    return parser


def parse_config(argv) -> tuple[str, RunConfig, bool]:
    """Resolve (subcommand, config, mutate flag) from argv.

    Precedence: command-line flags over config-file keys over defaults.
    """
    namespace = _build_parser().parse_args(argv)

    values: dict[str, object] = {}
    if namespace.config is not None:
        for key, text in _read_config_file(namespace.config).items():
            parse, _ = _FIELD_SPECS[key]
            values[key] = parse(key, text)
    for name in _FIELD_SPECS:
        text = getattr(namespace, name)
        if text is not None:
            parse, _ = _FIELD_SPECS[name]
            values[name] = parse(name, text)

    config = RunConfig(**values)
    for name, (_, validate) in _FIELD_SPECS.items():
        value = getattr(config, name)
        if value is not None:
            validate(value)
    return namespace.subcommand, config, namespace.mutate_reversal


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _metadata(config: RunConfig) -> dict:
    return {"seed": config.seed, "version": __version__, "config": asdict(config)}


def dispatch(subcommand: str, config: RunConfig, mutate_reversal: bool = False) -> int:
    """Run one subcommand and write its product; returns the exit code."""
    noise = NoiseModel(config.pbs_leakage, config.detector_efficiency)
    fmt = config.output_format or ("json" if subcommand == "verify" else "csv")
    wm = WeakMeasurement(config.epsilon, config.eta)

    if subcommand == "verify":
        report = verify(
            photons_per_setting=config.photons_per_setting,
            noise=noise,
            seed=config.seed,
            grid_size=config.grid_size,
            exact_mode=config.exact_mode,
            reversal_fn=corrupted_reversal_operator if mutate_reversal else None,
        )
        if fmt == "csv":
            text = tables.verify_csv(report.verdicts)
        else:
            text = tables.json_document(
                _metadata(config), "checks", tables.verify_json_rows(report.verdicts)
            )
        try:
            _emit(text, config.output_path)
        except OSError as exc:
            print(f"cannot write output: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        if not report.passed:
            failing = ", ".join(v.name for v in report.verdicts if not v.passed)
            print(f"verification FAILED: {failing}", file=sys.stderr)
            return EXIT_VERIFY_FAIL
        return EXIT_OK

    if subcommand == "sweep-states":
        rows = state_sweep(
            wm, config.photons_per_setting, noise, config.seed, config.exact_mode
        )
        text = (
            tables.states_csv(rows)
            if fmt == "csv"
            else tables.json_document(_metadata(config), "rows", tables.states_json_rows(rows))
        )
    elif subcommand == "sweep-grid":
        points = grid_sweep(
            grid_size=config.grid_size,
            photons_per_setting=config.photons_per_setting,
            noise=noise,
            seed=config.seed,
            exact_mode=config.exact_mode,
        )
        text = (
            tables.grid_csv(points)
            if fmt == "csv"
            else tables.json_document(_metadata(config), "rows", tables.grid_json_rows(points))
        )
    elif subcommand == "cross-section":
        rows = cross_section(
            np.linspace(0.0, 1.0, config.grid_size),
            photons_per_setting=config.photons_per_setting,
            noise=noise,
            seed=config.seed,
            exact_mode=config.exact_mode,
        )
        text = (
            tables.cross_section_csv(rows)
            if fmt == "csv"
            else tables.json_document(
                _metadata(config), "rows", tables.cross_section_json_rows(rows)
            )
        )
    elif subcommand == "reversal-fidelity":
        rows = reversal_fidelity_sweep(
            wm, config.counts_per_basis, noise, config.seed, config.exact_mode
        )
        text = (
            tables.fidelities_csv(rows)
            if fmt == "csv"
            else tables.json_document(
                _metadata(config), "rows", tables.fidelities_json_rows(rows)
            )
        )
    else:
        raise ConfigError(f"unknown subcommand {subcommand!r}")

    try:
        _emit(text, config.output_path)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    return EXIT_OK


def main(argv=None) -> int:
    try:
        subcommand, config, mutate = parse_config(argv)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        return dispatch(subcommand, config, mutate)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
