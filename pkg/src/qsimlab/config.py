"""Typed experiment configuration for the command-line harness.

Configs are flat ``key=value`` text; command-line flags override file
values ('flags win'), and the seed falls back to the QSIMLAB_SEED
environment variable. Every key is validated against the subcommand's
schema; unknown keys are rejected with their key path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional

SEED_ENV_VAR = "QSIMLAB_SEED"
DEFAULT_SEED = 7


class ConfigError(ValueError):
    """Schema violation, reported with the offending key path."""


@dataclass(frozen=True)
class Param:
    """One schema slot: value kind, default, optional choice set."""

    kind: str  # int | float | str | int_list | float_list
    default: object
    help: str = ""
    choices: tuple = ()


# command schemas; `seed` and `out` are shared slots handled separately
SCHEMAS: dict = {
    "qpe": {
        "phi": Param("float", 0.640625, "phase in [0,1) to estimate"),
        "bits": Param("int", 3, "ancilla / bit count"),
        "method": Param("str", "register", "estimation route",
                        choices=("register", "kitaev")),
        "shots": Param("int", 0, "shots per bit for kitaev (0 = exact)"),
    },
    "hhl": {
        "a": Param("float_list", (0.25, 0.0, 0.0, 0.5), "A, row-major"),
        "b": Param("float_list", (1.0, 0.0), "unit right-hand side"),
        "d": Param("int", 4, "eigenvalue register bits"),
        "c": Param("float", 0.25, "rotation constant C <= lambda_min"),
    },
    "teleport": {},
    "densecode": {},
    "ising encode": {
        "task": Param("str", "subset-sum", "encoding family",
                      choices=("subset-sum", "partition")),
        "values": Param("float_list", (-5.0, -3.0, 1.0, 4.0, 9.0), "set entries"),
        "m": Param("float", 7.0, "subset-sum target"),
    },
    "anneal": {
        "h": Param("float_list", (0.5, 0.25), "local fields"),
        "j": Param("float_list", (0.75,), "upper-triangular couplings, row-major"),
        "taus": Param("float_list", (0.5, 1.0, 2.0, 4.0, 8.0), "total times"),
    },
    "qaoa": {
        "h": Param("float_list", (0.5, 0.25), "local fields"),
        "j": Param("float_list", (0.75,), "upper-triangular couplings, row-major"),
        "p": Param("int", 1, "layer count"),
        "budget": Param("int", 300, "energy evaluations"),
    },
    "noise-sweep": {
        "eps": Param("float", 0.1, "X over-rotation"),
        "pE": Param("float", 0.007, "per-step environment flip probability"),
        "mu": Param("float", 0.03, "P(read 1 | true 0)"),
        "nu": Param("float", 0.07, "P(read 0 | true 1)"),
        "N": Param("int", 10, "shots per depth"),
        "dmax": Param("int", 80, "maximum depth"),
    },
    "qec bench": {
        "code": Param("str", "bitflip", "code family",
                      choices=("bitflip", "phaseflip")),
        "k": Param("int", 3, "repetition copies (odd)"),
        "eps": Param("float_list", (0.05, 0.1, 0.2, 0.3), "error rates"),
        "trials": Param("int", 100_000, "Monte-Carlo trials per rate"),
    },
    "qec stabilizers": {
        "generators": Param("str", "ZZI;IZZ", "';'-separated Pauli words"),
    },
    "zne": {
        "model": Param("str", "bitflip", "per-step channel",
                       choices=("bitflip", "depolarizing")),
        "p": Param("float", 0.02, "channel strength"),
        "depth": Param("int", 6, "probe depth"),
        "scales": Param("int_list", (1, 2, 3), "integer fold factors"),
        "shots": Param("int", 100_000, "shots per scale (0 = exact)"),
    },
    "pec": {
        "lambdas": Param("float_list", (0.8, 0.2, 0.0, 0.0),
                         "Pauli channel weights (I,X,Y,Z)"),
        "depth": Param("int", 4, "probe depth"),
        "shots": Param("int", 100_000, "shots"),
    },
    "dd": {
        "bath": Param("str", "", "bath file path (empty = built-in 3-mode)"),
        "total": Param("float", 2.0, "fixed total evolution time"),
        "dts": Param("float_list",
                     (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125),
                     "pulse half-periods to sweep"),
    },
    "reproduce-all": {
        "outdir": Param("str", "tables", "directory for the emitted tables"),
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated run request: subcommand, typed parameters, seed, sink."""

    subcommand: str
    params: Mapping
    seed: int
    out: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SCHEMAS:
            raise ConfigError(f"{self.subcommand}: unknown subcommand")
        object.__setattr__(self, "params", dict(self.params))


def parse_value(kind: str, text: str, keypath: str):
    """Parse one flat-text value into its schema kind."""
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
        if kind == "str":
            return text
        if kind == "int_list":
            return tuple(int(tok) for tok in text.split(",") if tok.strip())
        if kind == "float_list":
            return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"{keypath}: cannot parse {text!r} as {kind}")
    raise ConfigError(f"{keypath}: unknown kind {kind!r}")


def format_value(kind: str, value) -> str:
    """Canonical flat-text form; floats keep 17 significant digits."""
    if kind == "int":
        return str(int(value))
    if kind == "float":
        return format(float(value), ".17g")
    if kind == "str":
        return str(value)
    if kind == "int_list":
        return ",".join(str(int(v)) for v in value)
    if kind == "float_list":
        return ",".join(format(float(v), ".17g") for v in value)
    raise ConfigError(f"unknown kind {kind!r}")


def parse_config_text(text: str) -> dict:
    """Flat key=value lines; '#' comments and blanks ignored."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


def build_config(
    subcommand: str,
    file_values: Optional[Mapping] = None,
    flag_values: Optional[Mapping] = None,
    env: Optional[Mapping] = None,
) -> ExperimentConfig:
    """Merge file values and flag overrides against the schema.

    Precedence: flags > config file > environment (seed only) > defaults.
    file_values are raw strings; flag_values are already typed (or raw
    strings, which are parsed through the same schema).
    """
    if subcommand not in SCHEMAS:
        raise ConfigError(f"{subcommand}: unknown subcommand")
    schema = SCHEMAS[subcommand]
    env = os.environ if env is None else env

    params = {key: p.default for key, p in schema.items()}
    seed = DEFAULT_SEED
    if SEED_ENV_VAR in env:
        seed = parse_value("int", env[SEED_ENV_VAR], f"${SEED_ENV_VAR}")
    out = None

    def absorb(values: Mapping, origin: str):
        nonlocal seed, out
        for key, val in values.items():
            if val is None:
                continue
            keypath = f"{subcommand}.{key}"
            if key == "seed":
                seed = val if isinstance(val, int) else parse_value(
                    "int", val, keypath
                )
                continue
            if key == "out":
                out = str(val)
                continue
            if key not in schema:
                raise ConfigError(f"{keypath}: unknown parameter (from {origin})")
            p = schema[key]
            parsed = val if not isinstance(val, str) or p.kind == "str" \
                else parse_value(p.kind, val, keypath)
            if p.kind == "str":
                parsed = str(parsed)
            if p.choices and parsed not in p.choices:
                raise ConfigError(
                    f"{keypath}: {parsed!r} not one of {sorted(p.choices)}"
                )
            params[key] = parsed

    if file_values:
        absorb(file_values, "config file")
    if flag_values:
        absorb(flag_values, "flags")
    return ExperimentConfig(subcommand, params, seed, out)


def config_to_metadata(config: ExperimentConfig, version: str) -> tuple:
    """Ordered metadata pairs echoing the full config."""
    pairs = [
        ("version", version),
        ("subcommand", config.subcommand),
        ("seed", str(config.seed)),
    ]
    schema = SCHEMAS[config.subcommand]
    for key in schema:
        pairs.append((f"param.{key}", format_value(schema[key].kind,
                                                   config.params[key])))
    return tuple(pairs)


def config_from_metadata(pairs) -> ExperimentConfig:
    """Rebuild the ExperimentConfig a metadata header echoes."""
    values = dict(pairs)
    if "subcommand" not in values:
        raise ConfigError("metadata: missing subcommand")
    subcommand = values["subcommand"]
    raw = {
        key[len("param."):]: val
        for key, val in values.items()
        if key.startswith("param.")
    }
    raw["seed"] = values.get("seed", str(DEFAULT_SEED))
    return build_config(subcommand, file_values=raw, env={})
