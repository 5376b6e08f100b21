"""Run configuration: every tolerance and budget lives here, never at call sites."""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

from .errors import SpecParseError

ENV_CONFIG_PATH = "SPHERE_DISTAL_CONFIG"


@dataclass(frozen=True)
class OracleBudget:
    """Budget for the proximal-pair orbit oracle."""

    samples: int = 64
    iterations: int = 2000
    eps: float = 1e-4
    delta: float = 0.3


@dataclass(frozen=True)
class Config:
    """Tolerances and budgets for the whole library.

    Tolerance defaults: unit-norm 1e-9, spectral 1e-7, rank 1e-8,
    residual 1e-8, bisection interval 1e-12.  All relative tolerances
    are scaled by a norm of the matrix at the point of use.
    """

    unit_norm_tol: float = 1e-9
    spectral_tol: float = 1e-7
    rank_tol: float = 1e-8
    residual_tol: float = 1e-8
    bisection_tol: float = 1e-12
    singular_tol: float = 1e-12
    classify_tol: float = 1e-9  # affine regime bands around pullback norm 1
    cluster_tol: float = 1e-7  # eigenvalue clustering, relative
    coordinate_zero_tol: float = 1e-11  # branch dispatch on canonical coordinates
    spectrum_gap_tol: float = 1e-12  # resolvent parameter vs eigenvalue, relative
    recon_tol: float = 1e-9  # canonical-form reconstruction, relative
    guard_offset: float = 1e-10  # bracket endpoint guard near the spectrum, relative
    growth_factor: float = 10.0  # word-norm bound is growth_factor * dim
    max_word_length: int = 8
    random_words: int = 256
    oracle_words: int = 8  # words fed to the oracle by the semigroup test
    recurrence_scan: int = 100_000
    recurrence_eps: float = 1e-3
    rng_seed: int = 0
    oracle: OracleBudget = field(default_factory=OracleBudget)

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if f.type == "float" and getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")
        if not self.oracle.eps < self.oracle.delta:
            raise ValueError("oracle eps must be smaller than delta")

    def replace(self, **kwargs) -> "Config":
        return dataclasses.replace(self, **kwargs)

    def to_json(self) -> dict:
        out = dataclasses.asdict(self)
        return out


DEFAULT_CONFIG = Config()

_FLOAT_FIELDS = {
    f.name for f in dataclasses.fields(Config) if f.type == "float"
}
_INT_FIELDS = {
    f.name
    for f in dataclasses.fields(Config)
    if f.type == "int"
}


def config_from_dict(data: dict) -> Config:
    """Build a Config from a flat dict, with an optional nested "oracle" block."""
    if not isinstance(data, dict):
        raise SpecParseError("config must be a JSON object")
    kwargs = {}
    for key, value in data.items():
        if key == "oracle":
            if not isinstance(value, dict):
                raise SpecParseError("config 'oracle' must be an object")
            try:
                kwargs["oracle"] = OracleBudget(**value)
            except TypeError as exc:
                raise SpecParseError(f"bad oracle budget: {exc}") from exc
        elif key in _FLOAT_FIELDS:
            kwargs[key] = float(value)
        elif key in _INT_FIELDS:
            kwargs[key] = int(value)
        else:
            raise SpecParseError(f"unknown config field: {key}")
    try:
        return Config(**kwargs)
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc


def load_config(path: str | None = None) -> Config:
    """Load configuration from ``path``, the env fallback, or defaults.

    Resolution order: explicit path, then $SPHERE_DISTAL_CONFIG, then
    built-in defaults.
    """
    if path is None:
        path = os.environ.get(ENV_CONFIG_PATH)
    if path is None:
        return DEFAULT_CONFIG
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecParseError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
