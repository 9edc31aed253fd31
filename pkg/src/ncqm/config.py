"""Run configuration: plain-text ``key = value`` files overridden by flags."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

SUITES = ("group", "matrix", "coadjoint", "rep", "generators", "resolution",
          "quantize", "pov", "wigner", "all")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    m: float = 1.0
    lam: float = 0.5
    alpha: float = 1.0
    beta: float = 0.7
    gamma: float = -0.4
    n: int = 128
    l: float = 10.0
    phase_n: int = 24
    phase_l: float = 6.0
    seed: int = 0
    fast: bool = False
    suite: str = "all"
    out: str | None = None
    dump_states: str | None = None

    @property
    def theta(self) -> float:
        return self.lam / self.m**2

    def echo(self) -> dict:
        d = dataclasses.asdict(self)
        d["theta"] = self.theta
        return d


# config-file key -> (field, converter)
_KEYS = {
    "m": ("m", float), "lambda": ("lam", float), "lam": ("lam", float),
    "theta": ("theta", float),
    "alpha": ("alpha", float), "beta": ("beta", float), "gamma": ("gamma", float),
    "n": ("n", int), "grid_n": ("n", int), "l": ("l", float), "grid_l": ("l", float),
    "phase_n": ("phase_n", int), "phase_l": ("phase_l", float),
    "seed": ("seed", int), "fast": ("fast", None), "suite": ("suite", str),
    "out": ("out", str), "dump_states": ("dump_states", str),
}


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    out = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{no}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_").lower()
        if key not in _KEYS:
            raise ConfigError(f"{path}:{no}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{no}: empty value for {key!r}")
        out[key] = value
    return out


def _layer(values: Mapping[str, object]) -> dict:
    """Convert one layer of raw values to field values; lambda and theta are exclusive."""
    fields = {}
    for key, value in values.items():
        if value is None:
            continue
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}")
        name, conv = _KEYS[key]
        try:
            if conv is None:
                value = value if isinstance(value, bool) else _bool(str(value))
            elif not isinstance(value, conv) or isinstance(value, bool):
                value = conv(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad value for {key!r}: {value!r}") from e
        fields[name] = value
    if "lam" in fields and "theta" in fields:
        raise ConfigError("give either lambda or theta, not both")
    return fields


def parse_config(file: str | Path | None = None, flags: Mapping[str, object] | None = None,
                 ) -> RunConfig:
    """Defaults, then the file, then the flags; validated before returning.

    ``theta`` is stored as ``lambda = m^2 theta`` with the final ``m``.
    """
    merged: dict = {}
    for raw in (read_config_file(file) if file else {}, flags or {}):
        layer = _layer(raw)
        if "lam" in layer or "theta" in layer:
            merged.pop("lam", None)
            merged.pop("theta", None)
        merged.update(layer)
    theta = merged.pop("theta", None)
    cfg = RunConfig(**merged)
    if theta is not None:
        cfg = dataclasses.replace(cfg, lam=cfg.m**2 * theta)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    if not cfg.m > 0:
        raise ConfigError("m must be positive")
    if cfg.n < 8 or cfg.n & (cfg.n - 1):
        raise ConfigError(f"n must be a power of two >= 8, got {cfg.n}")
    if not cfg.l > 0:
        raise ConfigError("l must be positive")
    if cfg.phase_n < 2:
        raise ConfigError("phase_n must be at least 2")
    if not cfg.phase_l > 0:
        raise ConfigError("phase_l must be positive")
    if cfg.alpha == 0 or cfg.beta == 0 or cfg.gamma == 0:
        raise ConfigError("alpha, beta and gamma must be nonzero")
    if cfg.theta == 0 and cfg.suite in ("wigner", "all"):
        raise ConfigError("lambda must be nonzero for the wigner suite (it divides by theta)")
    if cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
