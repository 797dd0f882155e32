"""Simulation parameters and the flat ``key = value`` config file format."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Union

from .errors import ConfigurationError

SCHEMES = ("pbvc", "fcf", "uc", "lsfd", "lsfd_pbvc")


@dataclass(frozen=True)
class SimConfig:
    """Every tunable of the uplink simulation.

    Units: ``W`` in Hz, ``f_c`` in GHz, lengths in meters, ``noise_psd`` in
    dBm/Hz, ``noise_figure`` and ``sigma_sh`` in dB, powers in watts.
    ``tau_u`` defaults to ``tau_c - tau_p`` when left as ``None``.
    """

    M: int = 100
    K: int = 40
    N: int = 4
    N_AP: int = 4
    L: int = 20
    tau_p: int = 16
    tau_c: int = 200
    tau_u: Optional[int] = None
    W: float = 20e6
    f_c: float = 1.9
    side: float = 1000.0
    ap_height: float = 10.0
    user_height: float = 1.65
    noise_psd: float = -174.0
    noise_figure: float = 9.0
    sigma_sh: float = 4.0
    shadow_corr_distance: float = 10.0
    shadow_split: float = 0.5
    P_max: float = 0.1
    P_0: float = 1e-4
    kappa: float = 0.5
    schemes: tuple = SCHEMES
    drops: int = 200
    seed: int = 0
    allow_vc_sharing: bool = False

    def __post_init__(self):
        if self.tau_u is None:
            object.__setattr__(self, "tau_u", self.tau_c - self.tau_p)
        if isinstance(self.schemes, str):
            object.__setattr__(self, "schemes", _parse_schemes(self.schemes))
        else:
            object.__setattr__(self, "schemes", tuple(self.schemes))
        self.validate()

    def validate(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ConfigurationError(msg)

        for name in ("M", "K", "N", "N_AP", "L", "tau_p", "tau_c", "tau_u", "drops"):
            v = getattr(self, name)
            need(isinstance(v, int) and not isinstance(v, bool), f"{name} must be an integer")
        need(self.M >= 1, "M must be >= 1")
        need(self.K >= 1, "K must be >= 1")
        need(self.N >= 1, "N must be >= 1")
        need(math.isqrt(self.N) ** 2 == self.N, f"N={self.N} is not a perfect square")
        need(self.N_AP >= 1, "N_AP must be >= 1")
        need(1 <= self.L <= self.M, f"L must satisfy 1 <= L <= M (L={self.L}, M={self.M})")
        need(self.tau_p >= 1, "tau_p must be >= 1")
        need(self.tau_p < self.tau_c, "tau_p must be smaller than tau_c")
        need(1 <= self.tau_u <= self.tau_c - self.tau_p, "tau_u must lie in [1, tau_c - tau_p]")
        need(self.drops >= 1, "drops must be >= 1")
        for name in ("W", "f_c", "side", "P_max", "P_0", "shadow_corr_distance"):
            v = getattr(self, name)
            need(math.isfinite(v) and v > 0, f"{name} must be positive")
        need(self.ap_height >= 0 and self.user_height >= 0, "heights must be nonnegative")
        need(self.sigma_sh >= 0, "sigma_sh must be nonnegative")
        need(0.0 <= self.shadow_split <= 1.0, "shadow_split must lie in [0, 1]")
        need(0.0 <= self.kappa <= 1.0, "kappa must lie in [0, 1]")
        for s in self.schemes:
            need(s in SCHEMES, f"unknown scheme {s!r}")

    @property
    def prelog(self) -> float:
        return self.tau_u / self.tau_c

    def replace(self, **changes) -> "SimConfig":
        if "tau_p" in changes or "tau_c" in changes:
            changes.setdefault("tau_u", None)
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["schemes"] = list(self.schemes)
        return d


def _parse_schemes(text: str) -> tuple:
    items = tuple(s.strip().lower() for s in text.split(",") if s.strip())
    for s in items:
        if s not in SCHEMES:
            raise ConfigurationError(f"unknown scheme {s!r}; choose from {', '.join(SCHEMES)}")
    return items


_FIELD_TYPES = {f.name: f.type for f in fields(SimConfig)}


def _coerce(key: str, raw: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "int":
            return int(raw)
        if kind == "Optional[int]":
            return None if raw.lower() in ("", "none", "auto") else int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if kind == "tuple":
            return _parse_schemes(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key!r}: {raw!r}") from exc
    raise ConfigurationError(f"unsupported field type for {key!r}")


def parse_config_text(text: str, base: Optional[SimConfig] = None) -> SimConfig:
    """Parse ``key = value`` lines (``#`` starts a comment) over ``base``."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, raw)
    base = base or SimConfig()
    return base.replace(**values)


def load_config(path: Union[str, Path]) -> SimConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config_text(text)


def format_config(config: SimConfig) -> str:
    lines = []
    for f in fields(SimConfig):
        v = getattr(config, f.name)
        if f.name == "schemes":
            v = ",".join(v)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
