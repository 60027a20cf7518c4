"""Experiment config files: JSON schema, defaults, and conversion to ``RunConfig``."""

from __future__ import annotations

import copy
import json
import math
from pathlib import Path

import jsonschema

from .collapse import CollapseModel, JointModel, Variant
from .ether import DriftConfig, Interferometer
from .experiment import RunConfig, calibrate_device_phase

SEED_ENV = "COLLAPSE_LAB_SEED"


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


def _obj(properties: dict) -> dict:
    return {"type": "object", "properties": properties, "additionalProperties": False}


_NUM = {"type": "number"}
_PROB = {"type": "number", "minimum": 0, "maximum": 1}

EXPERIMENT_SCHEMA = _obj(
    {
        "model": {"enum": [v.value for v in Variant]},
        "msBeforeBefore": {"type": "boolean"},
        "interferometer": _obj(
            {
                "armLengthM": {"type": "number", "exclusiveMinimum": 0},
                "wavelengthM": {"type": "number", "exclusiveMinimum": 0},
                "devicePhaseRad": _NUM,
                "orientationRad": _NUM,
                "armAzimuthRad": _NUM,
                "calibrateOperatingPoint": {"type": "boolean"},
            }
        ),
        "drift": _obj(
            {
                "speedMps": {"type": "number", "minimum": 0},
                "rightAscensionRad": _NUM,
                "declinationRad": _NUM,
                "labLatitudeRad": _NUM,
                "labLongitudeRad": _NUM,
            }
        ),
        "run": _obj(
            {
                "nHeralds": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
                "efficiency": _PROB,
                "darkCountProb": _PROB,
                "visibility": _PROB,
                "separateRuns": {"type": "boolean"},
                "shards": {"type": "integer", "minimum": 1},
            }
        ),
        "constants": _obj({"paperMode": {"type": "boolean"}}),
    }
)

DEFAULTS = {
    "model": "covariant",
    "msBeforeBefore": True,
    "interferometer": {
        "armLengthM": 6.25,
        "wavelengthM": 1550e-9,
        "devicePhaseRad": math.pi / 2,
        "orientationRad": 0.0,
        "armAzimuthRad": 0.0,
        "calibrateOperatingPoint": False,
    },
    "drift": {
        "speedMps": 3.0e4,
        "rightAscensionRad": 0.0,
        "declinationRad": 0.0,
        "labLatitudeRad": 0.0,
        "labLongitudeRad": 0.0,
    },
    "run": {
        "nHeralds": 1_000_000,
        "seed": 0,
        "efficiency": 0.8,
        "darkCountProb": 1e-4,
        "visibility": 1.0,
        "separateRuns": False,
        "shards": 8,
    },
    "constants": {"paperMode": False},
}


def _describe(err: jsonschema.ValidationError) -> str:
    where = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"{where}: {err.message}"


def validate(doc: dict, schema: dict = EXPERIMENT_SCHEMA) -> None:
    errors = sorted(
        jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.absolute_path)
    )
    if errors:
        raise ConfigError("; ".join(_describe(e) for e in errors))


def merge_defaults(doc: dict) -> dict:
    out = copy.deepcopy(DEFAULTS)
    for key, value in doc.items():
        if isinstance(value, dict):
            out[key].update(value)
        else:
            out[key] = value
    return out


def load_document(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return doc


def build_run_config(doc: dict) -> RunConfig:
    """Validate ``doc`` (partial documents allowed) and turn it into a ``RunConfig``."""
    validate(doc)
    full = merge_defaults(doc)
    ifo_doc, drift_doc, run_doc = full["interferometer"], full["drift"], full["run"]
    try:
        ifo = Interferometer(
            arm_length=ifo_doc["armLengthM"],
            wavelength=ifo_doc["wavelengthM"],
            device_phase=ifo_doc["devicePhaseRad"],
            orientation=ifo_doc["orientationRad"],
            arm_azimuth=ifo_doc["armAzimuthRad"],
        )
        drift = DriftConfig(
            speed=drift_doc["speedMps"],
            right_ascension=drift_doc["rightAscensionRad"],
            declination=drift_doc["declinationRad"],
            lab_latitude=drift_doc["labLatitudeRad"],
            lab_longitude=drift_doc["labLongitudeRad"],
        )
        model = CollapseModel(
            Variant(full["model"]), run_doc["visibility"], drift, full["msBeforeBefore"]
        )
        cfg = RunConfig(
            interferometer=ifo,
            model=model,
            n_heralds=run_doc["nHeralds"],
            seed=run_doc["seed"],
            efficiency=run_doc["efficiency"],
            dark_count_prob=run_doc["darkCountProb"],
            separate_runs=run_doc["separateRuns"],
            paper_mode=full["constants"]["paperMode"],
            shards=run_doc["shards"],
        )
        if drift.speed >= cfg.c:
            raise ValueError(f"drift/speedMps must be below c = {cfg.c}")
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if ifo_doc["calibrateOperatingPoint"]:
        cfg = calibrate_device_phase(cfg)
    return cfg


JOINT_MODEL_SCHEMA = _obj(
    {
        "aliceSettings": {"type": "array", "minItems": 1},
        "bobSettings": {"type": "array", "minItems": 1},
        "table": {"type": "array"},
        "observable": {"enum": ["marginal", "joint"]},
    }
)
JOINT_MODEL_SCHEMA["required"] = ["aliceSettings", "bobSettings", "table"]


def joint_model_from_dict(doc: dict) -> JointModel:
    """Build a ``JointModel`` from its file form.

    ``table[i][j]`` is the 2x2 array ``[[P(+,+), P(+,-)], [P(-,+), P(-,-)]]``
    for Alice setting ``i`` and Bob setting ``j``.
    """
    validate(doc, JOINT_MODEL_SCHEMA)
    try:
        return JointModel(
            tuple(doc["aliceSettings"]),
            tuple(doc["bobSettings"]),
            doc["table"],
            doc.get("observable", "marginal"),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def joint_model_to_dict(m: JointModel) -> dict:
    return {
        "aliceSettings": list(m.alice_settings),
        "bobSettings": list(m.bob_settings),
        "table": m.table.tolist(),
        "observable": m.observable,
    }
