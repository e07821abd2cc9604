"""JSON serialization: architecture configs and run manifests.

The config format is versioned and human-diffable; floats round-trip
exactly through ``json`` (shortest-repr encoding), so a re-imported
architecture evaluates bit-identically.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Any

from . import __version__
from .architecture import SENSOR, STAGE, EthicsArchitecture, Stage, validate_architecture
from .fuzzy import FuzzySystem, FuzzyVariable, Rule
from .membership import MembershipFunction

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed or invariant-violating configuration."""


def _variable_to_dict(var: FuzzyVariable) -> dict:
    return {
        "name": var.name,
        "range": [var.low, var.high],
        "mfs": {
            label: {"shape": mf.shape, "params": list(mf.params)}
            for label, mf in var.mfs.items()
        },
    }


def _variable_from_dict(d: dict) -> FuzzyVariable:
    mfs = {
        label: MembershipFunction(spec["shape"], tuple(spec["params"]), check=False)
        for label, spec in d["mfs"].items()
    }
    lo, hi = d["range"]
    return FuzzyVariable(d["name"], float(lo), float(hi), mfs)


def architecture_to_dict(arch: EthicsArchitecture, name: str) -> dict:
    stages = []
    for stage in arch.stages:
        system = stage.system
        stages.append(
            {
                "name": stage.name,
                "grid_points": system.grid_points,
                "inputs": [_variable_to_dict(v) for v in system.inputs],
                "output": _variable_to_dict(system.output),
                "rules": [
                    {
                        "when": {var: label for var, label in rule.antecedents},
                        "then": rule.consequent[1],
                    }
                    for rule in system.rules
                ],
            }
        )
    wiring = {
        stage: {var: f"{kind}:{src}" for var, (kind, src) in mapping.items()}
        for stage, mapping in arch.wiring.items()
    }
    return {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "sensors": list(arch.sensors),
        "stages": stages,
        "wiring": wiring,
    }


def architecture_from_dict(doc: dict) -> EthicsArchitecture:
    """Build and fully validate an architecture from a config document."""
    try:
        version = doc["schema_version"]
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version}, expected {SCHEMA_VERSION}")
        stages = []
        for sd in doc["stages"]:
            output = _variable_from_dict(sd["output"])
            rules = tuple(
                Rule(
                    antecedents=tuple((v, l) for v, l in rd["when"].items()),
                    consequent=(output.name, rd["then"]),
                )
                for rd in sd["rules"]
            )
            system = FuzzySystem(
                inputs=tuple(_variable_from_dict(v) for v in sd["inputs"]),
                output=output,
                rules=rules,
                grid_points=int(sd.get("grid_points", 1001)),
            )
            stages.append(Stage(sd["name"], system))
        wiring = {}
        for stage_name, mapping in doc["wiring"].items():
            parsed = {}
            for var, source in mapping.items():
                kind, _, src = str(source).partition(":")
                if kind not in (SENSOR, STAGE) or not src:
                    raise ConfigError(
                        f"wiring for {stage_name}.{var} must look like "
                        f"'sensor:<channel>' or 'stage:<name>', got {source!r}"
                    )
                parsed[var] = (kind, src)
            wiring[stage_name] = parsed
        arch = EthicsArchitecture(
            sensors=tuple(doc["sensors"]), stages=tuple(stages), wiring=wiring
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed architecture config: {exc}") from exc
    problems = validate_architecture(arch)
    if problems:
        raise ConfigError("invalid architecture config:\n  " + "\n  ".join(problems))
    return arch


def save_architecture(arch: EthicsArchitecture, name: str, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(architecture_to_dict(arch, name), fh, indent=2)
        fh.write("\n")


def load_architecture(path) -> EthicsArchitecture:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"not valid JSON: {exc}") from exc
    return architecture_from_dict(doc)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to replay one run bit-exactly."""

    architecture: str  # builtin name or config path
    schedule: dict[str, Any]
    outputs: list[str]
    seed: int | None = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION


def save_manifest(manifest: RunManifest, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh, indent=2)
        fh.write("\n")


def load_manifest(path) -> RunManifest:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        return RunManifest(
            architecture=doc["architecture"],
            schedule=dict(doc["schedule"]),
            outputs=list(doc["outputs"]),
            seed=doc.get("seed"),
            tool_version=doc.get("tool_version", "unknown"),
            schema_version=doc.get("schema_version", SCHEMA_VERSION),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed manifest: {exc}") from exc
