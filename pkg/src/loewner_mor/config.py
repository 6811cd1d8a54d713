"""Experiment configuration: strict JSON validated before any computation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import jsonschema

from .beam import BeamParams
from .exceptions import ConfigError, DomainError
from .loewner import PARTITION_SCHEMES
from .plants import validate_plant_spec

__all__ = ["ExperimentConfig", "CONFIG_SCHEMA", "load_config_file", "build_config", "parse_grid"]

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "plant": {"type": "string"},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lo_exp", "hi_exp", "count"],
            "properties": {
                "lo_exp": {"type": "number"},
                "hi_exp": {"type": "number"},
                "count": {"type": "integer", "minimum": 2},
            },
        },
        "partition": {"enum": list(PARTITION_SCHEMES)},
        "order": {"type": ["integer", "null"], "minimum": 1},
        "tol": _POSITIVE,
        "out": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "samples": {"type": ["string", "null"]},
        "models": {"type": "array", "items": {"type": "string"}},
        "count": {"type": "integer", "minimum": 1},
        "zeros": {"type": "boolean"},
        "svg": {"type": "boolean"},
        "n_jobs": {"type": "integer", "minimum": 1},
        "beam": {
            "type": "object",
            "additionalProperties": False,
            "required": ["length", "youngs_modulus", "inertia", "damping"],
            "properties": {k: _POSITIVE for k in ("length", "youngs_modulus", "inertia", "damping")},
        },
    },
}


@dataclass
class ExperimentConfig:
    plant: str = "beam"
    grid: dict = field(default_factory=lambda: {"lo_exp": 1.0, "hi_exp": 4.5, "count": 400})
    partition: str = "alternating"
    order: Optional[int] = None
    tol: float = 1e-10
    out: str = "."
    seed: int = 0
    samples: Optional[str] = None
    models: list = field(default_factory=list)
    count: int = 16
    zeros: bool = False
    svg: bool = False
    n_jobs: int = 1
    beam: Optional[dict] = None

    def beam_params(self):
        if self.beam is None:
            return BeamParams.default()
        try:
            return BeamParams(**self.beam)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    def to_dict(self):
        return asdict(self)


def parse_grid(text):
    """``"lo:hi:count"`` to a grid dict."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects lo:hi:count, got {text!r}")
    try:
        return {"lo_exp": float(parts[0]), "hi_exp": float(parts[1]), "count": int(parts[2])}
    except ValueError:
        raise ConfigError(f"--grid expects lo:hi:count, got {text!r}") from None


def load_config_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None


def build_config(file_values=None, overrides=None):
    """Merge file values and command-line overrides, then validate.

    Unknown keys, wrong types and plant requirements are all reported as
    :class:`ConfigError`.
    """
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        jsonschema.validate(merged, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    cfg = ExperimentConfig(**merged)
    grid = cfg.grid
    if not grid["lo_exp"] < grid["hi_exp"]:
        raise ConfigError("grid: lo_exp must be smaller than hi_exp")
    validate_plant_spec(cfg.plant)
    for spec in cfg.models:
        validate_plant_spec(spec)
    cfg.beam_params()
    return cfg
