"""Run configuration: INI config files merged with command-line flags.

Config files are line-oriented key=value with [sections]; section names are
organizational only and every key must be one the CLI knows. Flags win over
file values, which win over built-in defaults.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields
from typing import Optional

from .errors import ConfigError, ParseError

_INT_KEYS = {
    "seed", "target", "n_int", "min_steps", "m", "batch_size",
    "m_start", "m_max", "warmup", "repeats",
}
_FLOAT_KEYS = {"baseline_constant", "noise_lo", "noise_hi", "delta_th", "timeout"}
_BOOL_KEYS = {"logit", "timing"}
_INT_LIST_KEYS = {"n_ints", "m_grid"}
_FLOAT_LIST_KEYS = {"delta_ths"}
_STR_KEYS = {
    "model", "weights", "endpoint", "input", "baseline", "scheduler",
    "rule", "report", "heatmap", "csv", "latency_csv",
}
KNOWN_KEYS = (
    _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _INT_LIST_KEYS | _FLOAT_LIST_KEYS | _STR_KEYS
)


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in str(text).replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in str(text).replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _coerce(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            lowered = raw.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if key in _INT_LIST_KEYS:
            return parse_int_list(raw)
        if key in _FLOAT_LIST_KEYS:
            return parse_float_list(raw)
    except ValueError:
        raise ParseError(f"config key {key!r} has invalid value {raw!r}") from None
    return raw


def load_config_file(path) -> dict:
    """Flattened, type-coerced key/value pairs from an INI config file."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except configparser.Error as exc:
        raise ParseError(f"bad config file {path}: {exc}") from None
    merged: dict = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in KNOWN_KEYS:
                raise ConfigError(
                    f"unknown config key {key!r} in section [{section}]"
                )
            merged[key] = _coerce(key, raw)
    return merged


@dataclass
class RunConfig:
    """Everything a CLI verb needs; see the README for field meanings."""

    model: Optional[str] = None
    weights: Optional[str] = None
    endpoint: Optional[str] = None
    logit: bool = False
    input: Optional[str] = None
    baseline: str = "zero"
    baseline_constant: float = 0.0
    noise_lo: float = 0.0
    noise_hi: float = 1.0
    seed: int = 0
    target: int = 1
    scheduler: str = "uniform"
    n_int: int = 4
    min_steps: int = 1
    m: Optional[int] = None
    delta_th: Optional[float] = None
    rule: str = "midpoint"
    batch_size: int = 16
    m_start: int = 16
    m_max: int = 8192
    warmup: int = 3
    repeats: int = 10
    timeout: float = 30.0
    delta_ths: tuple = (0.02, 0.01, 0.005)
    n_ints: tuple = (2, 4, 8)
    m_grid: Optional[tuple] = None
    report: Optional[str] = None
    heatmap: Optional[str] = None
    csv: Optional[str] = None
    latency_csv: Optional[str] = None
    timing: bool = False

    @classmethod
    def from_sources(cls, flag_values: dict, file_values: dict) -> "RunConfig":
        """Built-in defaults, overridden by file values, overridden by flags."""
        cfg = cls()
        valid = {f.name for f in fields(cls)}
        for source in (file_values, flag_values):
            for key, value in source.items():
                if value is None or key not in valid:
                    continue
                setattr(cfg, key, value)
        return cfg

    def validate(self, verb: str) -> None:
        if self.weights and self.model:
            raise ConfigError("give either a builtin model name or a weights file")
        if self.endpoint and (self.model or self.weights):
            raise ConfigError("a remote endpoint excludes local model options")
        for label, path in (("weights", self.weights), ("input", self.input)):
            if path and not os.path.exists(path):
                raise ConfigError(f"{label} file not found: {path}")
        if self.scheduler not in ("uniform", "nonuniform"):
            raise ConfigError(f"unknown scheduler {self.scheduler!r}")
        if self.baseline not in ("zero", "constant", "uniform_noise"):
            raise ConfigError(f"unknown baseline kind {self.baseline!r}")
        if verb in ("attribute", "bench"):
            given = [v for v in (self.m, self.delta_th) if v is not None]
            if len(given) != 1:
                raise ConfigError("give exactly one of m / delta_th")
        if verb == "compare" and (not self.delta_ths or not self.n_ints):
            raise ConfigError("compare needs delta_ths and n_ints")
        if verb == "sweep" and not self.m_grid:
            raise ConfigError("sweep needs m_grid")
