"""Run configuration: JSON document, schema, defaults."""

from __future__ import annotations

import copy
import hashlib
import json
from pathlib import Path

import jsonschema

from .errors import ConfigError
from .rng import DEFAULT_SEED

_LADDER = {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1}
_BUMP = {
    "type": "object",
    "properties": {
        "support_lo": {"type": "number"}, "support_hi": {"type": "number"},
        "plateau_lo": {"type": "number"}, "plateau_hi": {"type": "number"},
        "height": {"type": "number", "exclusiveMinimum": 0},
        "profile": {"enum": ["mollifier", "plateau"]},
    },
    "required": ["support_lo", "support_hi", "plateau_lo", "plateau_hi"],
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "output_dir": {"type": "string"},
        "threads": {"type": "integer", "minimum": 1},
        "symbol": {
            "type": "object",
            "properties": {
                "dimension": {"enum": [2, 3]},
                "lambda": {"type": "number"},
                "box_half_side": {"type": "number", "exclusiveMinimum": 0},
                "points_per_wavelength": {"type": "number", "exclusiveMinimum": 0},
                "radial": _BUMP,
                "angular": _BUMP,
                "cap_radius": {"type": "number", "exclusiveMinimum": 0, "maximum": 1.5},
            },
            "additionalProperties": False,
        },
        "kernel": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "n_points": {"type": "integer", "minimum": 1},
                "tolerance": {"type": "number", "exclusiveMinimum": 0},
                "save_fields": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "lemma1": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "n_r": {"type": "integer", "minimum": 16},
                "n_theta": {"type": "integer", "minimum": 16},
            },
            "additionalProperties": False,
        },
        "statphase": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "cap_radius": {"type": "number", "exclusiveMinimum": 0, "maximum": 1.5},
                "nu": {"type": "number", "exclusiveMinimum": 0},
                "ratio_window": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
                "slope_tolerance": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "parallelepiped": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "nu": {"type": "number", "exclusiveMinimum": 0},
                "cap_radius": {"type": "number", "exclusiveMinimum": 0, "maximum": 1.5},
                "n": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 3, "maxItems": 3},
                "max_factor": {"type": "number", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "opnorm": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "ps": {"type": "array", "items": {"type": "number", "minimum": 1}, "minItems": 1},
                "ball_radius": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.1},
                "slope_tolerance": {"type": "number", "exclusiveMinimum": 0},
                "min_r_squared": {"type": "number", "minimum": 0, "maximum": 1},
            },
            "additionalProperties": False,
        },
        "besov": {
            "type": "object",
            "properties": {
                "ladder": _LADDER,
                "dilations": _LADDER,
                "random_spectra": {"type": "integer", "minimum": 1},
                "slope_tolerance": {"type": "number", "exclusiveMinimum": 0},
                "max_spread": {"type": "number", "minimum": 1},
            },
            "additionalProperties": False,
        },
        "seq_ineq": {
            "type": "object",
            "properties": {
                "A": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 1}, "minItems": 1},
                "trials": {"type": "integer", "minimum": 1},
                "max_len": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

DEFAULTS = {
    "seed": DEFAULT_SEED,
    "output_dir": "oscillint-out",
    "threads": 1,
    "symbol": {"dimension": 2, "lambda": 16.0, "box_half_side": 2.0, "points_per_wavelength": 8.0},
    "kernel": {"ladder": [16, 32, 64], "n_points": 100, "tolerance": 1e-3, "save_fields": False},
    "lemma1": {"ladder": [16, 32, 64, 128], "n_r": 64, "n_theta": 64},
    "statphase": {"ladder": [8, 16], "cap_radius": 0.5, "nu": 0.3, "ratio_window": [0.3, 0.8],
                  "slope_tolerance": 0.1},
    "parallelepiped": {"ladder": [8, 16], "nu": 0.3, "cap_radius": 0.5, "n": [9, 5, 5], "max_factor": 2.0},
    "opnorm": {"ladder": [16, 32, 64, 128], "ps": [1.0, 4.0 / 3.0, 2.0], "ball_radius": 0.01,
               "slope_tolerance": 0.15, "min_r_squared": 0.98},
    "besov": {"ladder": [16, 32, 64, 128], "dilations": [0.5, 1.0, 2.0, 3.0, 7.5], "random_spectra": 1000,
              "slope_tolerance": 0.15, "max_spread": 2.0},
    "seq_ineq": {"A": [2 ** 0.5, 2.0, 2 * 2 ** 0.5, 4.0], "trials": 100_000, "max_len": 64},
}


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def validate(cfg: dict) -> dict:
    """Check ``cfg`` against the schema and fill in defaults."""
    try:
        jsonschema.validate(cfg, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    return _merge(DEFAULTS, cfg)


def read_config(path) -> dict:
    """Raw (unvalidated) document from a JSON file."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return raw


def load_config(path=None, overrides: dict | None = None) -> dict:
    """Read, overlay ``overrides`` (nested dict), validate and fill defaults."""
    raw = {} if path is None else read_config(path)
    if overrides:
        raw = _merge(raw, overrides)
    return validate(raw)


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()
