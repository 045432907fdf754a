"""Strict INI-style run configuration.

Sections describe the dataset ([data]), the temperature policy
([policy]), distillation training ([kd]), selection strategies
([aco]/[pso]/[grid]/[random]) and the output directory ([out]). Unknown
sections or keys are hard errors naming the offender, so typos cannot
silently fall back to defaults. All randomness is seeded from here.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .errors import ConfigParseError
from .temperature import ConstantPolicy, RuleBasedPolicy, UncertaintyLinearPolicy


def _int(s: str) -> int:
    return int(s)


def _float(s: str) -> float:
    return float(s)


def _floats(s: str) -> list[float]:
    return [float(v) for v in s.split(",")]


def _ints(s: str) -> list[int]:
    return [int(v) for v in s.split(",")]


def _bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _str(s: str) -> str:
    return s


_SCHEMA = {
    "data": {
        "samples": _int,
        "classes": _int,
        "dim": _int,
        "complexity": _floats,
        "noise_kind": _str,
        "noise_level": _float,
        "noise_fraction": _float,
        "seed": _int,
    },
    "policy": {
        "variant": _str,
        # constant
        "temperature": _float,
        # uncertainty_linear
        "scale": _float,
        # rule_based
        "base_temperature": _float,
        "raise_step": _float,
        "lower_step": _float,
        "min_temperature": _float,
        "max_temperature": _float,
        "noise_threshold": _float,
        "confidence_threshold": _float,
        "complexity_threshold": _float,
        "base_weight": _float,
        "weight_step": _float,
        "max_weight": _float,
    },
    "kd": {
        "t_base": _float,
        "epochs": _int,
        "batch_size": _int,
        "learning_rate": _float,
        "seed": _int,
        "teacher_hidden": _ints,
        "student_hidden": _ints,
    },
    "aco": {
        "pool": _str,
        "alpha": _float,
        "beta": _float,
        "rho": _float,
        "q0": _float,
        "n_ants": _int,
        "n_iterations": _int,
        "seed": _int,
        "pair_mode": _bool,
        "init_pheromone": _floats,
        "init_heuristic": _floats,
    },
    "pso": {
        "pool": _str,
        "n_particles": _int,
        "n_iterations": _int,
        "inertia": _float,
        "c1": _float,
        "c2": _float,
        "seed": _int,
    },
    "grid": {
        "pool": _str,
        "pair_mode": _bool,
    },
    "random": {
        "pool": _str,
        "n_picks": _int,
        "seed": _int,
    },
    "out": {
        "dir": _str,
    },
}

_POLICY_KEYS = {
    "constant": {"variant", "temperature"},
    "uncertainty_linear": {"variant", "scale"},
    "rule_based": {
        "variant", "base_temperature", "raise_step", "lower_step", "min_temperature",
        "max_temperature", "noise_threshold", "confidence_threshold",
        "complexity_threshold", "base_weight", "weight_step", "max_weight",
    },
}


class RunConfig:
    """Parsed sections plus the config file's own location (for relative paths)."""

    def __init__(self, sections: dict, path: Path):
        self.sections = sections
        self.path = path

    def has(self, section: str) -> bool:
        return section in self.sections

    def section(self, name: str) -> dict:
        if name not in self.sections:
            raise ConfigParseError(f"missing required section [{name}]")
        return self.sections[name]

    def get(self, section: str, key: str, default=None):
        sec = self.section(section)
        if key not in sec:
            if default is None:
                raise ConfigParseError(f"missing required key {key!r} in section [{section}]")
            return default
        return sec[key]

    def resolve(self, relpath: str) -> Path:
        """Paths in the config are relative to the config file itself."""
        p = Path(relpath)
        return p if p.is_absolute() else self.path.parent / p


def load_config(path) -> RunConfig:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc

    sections: dict = {}
    for name in parser.sections():
        if name not in _SCHEMA:
            raise ConfigParseError(f"{path}: unknown section [{name}]")
        schema = _SCHEMA[name]
        parsed = {}
        for key, raw in parser.items(name):
            if key not in schema:
                raise ConfigParseError(f"{path}: unknown key {key!r} in section [{name}]")
            try:
                parsed[key] = schema[key](raw)
            except ValueError as exc:
                raise ConfigParseError(
                    f"{path}: bad value for {key!r} in [{name}]: {exc}"
                ) from exc
        sections[name] = parsed
    cfg = RunConfig(sections, path)
    if cfg.has("policy"):
        _check_policy_keys(cfg.sections["policy"], path)
    return cfg


def _check_policy_keys(section: dict, path) -> None:
    variant = section.get("variant")
    if variant not in _POLICY_KEYS:
        raise ConfigParseError(
            f"{path}: [policy] variant must be one of {sorted(_POLICY_KEYS)}, got {variant!r}"
        )
    extra = set(section) - _POLICY_KEYS[variant]
    if extra:
        raise ConfigParseError(
            f"{path}: keys {sorted(extra)} not valid for policy variant {variant!r}"
        )


def build_policy(section: dict):
    """[policy] section -> policy object, with per-variant defaults."""
    variant = section["variant"]
    if variant == "constant":
        return ConstantPolicy(temperature=section.get("temperature", 2.0))
    if variant == "uncertainty_linear":
        return UncertaintyLinearPolicy(scale=section.get("scale", 2.0))
    kwargs = {k: v for k, v in section.items() if k != "variant"}
    return RuleBasedPolicy(**kwargs)
