"""Single-system fuzzy inference: fuzzify, fire rules, aggregate, defuzzify.

Inference is Mamdani-style throughout: rule strength is the minimum of
the antecedent degrees, each fired rule clips its consequent curve at
the rule strength, clipped curves combine by pointwise maximum, and the
crisp output is the centroid of the aggregate over a uniform grid.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .membership import SHAPE_CODES, MembershipFunction, eval_mf  # noqa: F401 (re-export)

GRID_POINTS_ENV = "AUTOMETRIC_GRID_POINTS"
MIN_GRID_POINTS = 101


class NoFiringError(RuntimeError):
    """Raised when every rule fires at strength zero (empty aggregate)."""


class MissingInputError(LookupError):
    """An inference call did not supply a required input variable."""


class UnknownLabelError(LookupError):
    """A rule references a variable or label with no fuzzified degree."""


def default_grid_points() -> int:
    """Defuzzification resolution; AUTOMETRIC_GRID_POINTS overrides it."""
    raw = os.environ.get(GRID_POINTS_ENV)
    if raw is None:
        return 1001
    n = int(raw)
    if n < MIN_GRID_POINTS:
        raise ValueError(f"{GRID_POINTS_ENV} must be >= {MIN_GRID_POINTS}, got {n}")
    return n


@dataclass(frozen=True)
class FuzzyVariable:
    """A named variable with a value range and labelled membership functions."""

    name: str
    low: float
    high: float
    mfs: Mapping[str, MembershipFunction]

    def __post_init__(self):
        object.__setattr__(self, "mfs", dict(self.mfs))

    def violations(self) -> list[str]:
        out = []
        if not self.name:
            out.append("variable name must be nonempty")
        if not self.low < self.high:
            out.append(f"variable {self.name!r}: range low {self.low} must be < high {self.high}")
        if not self.mfs:
            out.append(f"variable {self.name!r}: needs at least one membership function")
        for label, mf in self.mfs.items():
            if not label:
                out.append(f"variable {self.name!r}: empty membership label")
            for problem in mf.violations():
                out.append(f"variable {self.name!r}, label {label!r}: {problem}")
        return out

    def clamp(self, x: float) -> float:
        return min(max(x, self.low), self.high)


@dataclass(frozen=True)
class Rule:
    """AND-conjunction of (variable, label) antecedents with one consequent."""

    antecedents: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]

    def __post_init__(self):
        object.__setattr__(
            self, "antecedents", tuple((str(v), str(l)) for v, l in self.antecedents)
        )
        object.__setattr__(self, "consequent", (str(self.consequent[0]), str(self.consequent[1])))


@dataclass(frozen=True)
class FuzzySystem:
    """Input variables, one output variable, and min-conjunction rules."""

    inputs: tuple[FuzzyVariable, ...]
    output: FuzzyVariable
    rules: tuple[Rule, ...]
    grid_points: int = field(default_factory=default_grid_points)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))

    def input(self, name: str) -> FuzzyVariable:
        for var in self.inputs:
            if var.name == name:
                return var
        raise UnknownLabelError(f"no input variable named {name!r}")

    @cached_property
    def _grid(self) -> np.ndarray:
        return np.linspace(self.output.low, self.output.high, self.grid_points)

    @cached_property
    def _consequent_curves(self) -> np.ndarray:
        """One sampled consequent curve per rule, on the output grid."""
        curves = np.empty((len(self.rules), self.grid_points))
        for i, rule in enumerate(self.rules):
            mf = self.output.mfs[rule.consequent[1]]
            curves[i] = _kernels.eval_mf_array(SHAPE_CODES[mf.shape], mf.params, self._grid)
        return np.ascontiguousarray(curves)


def fuzzify(var: FuzzyVariable, x: float) -> dict[str, float]:
    """Degrees of membership of ``x`` for every label of ``var``.

    Out-of-range values are clamped to the variable range first; the
    shoulder functions saturate there anyway.
    """
    x = var.clamp(x)
    return {label: eval_mf(mf, x) for label, mf in var.mfs.items()}


def fire_rule(rule: Rule, fuzzified: Mapping[str, Mapping[str, float]]) -> float:
    """Rule strength: minimum of the antecedent degrees."""
    strength = 1.0
    for var_name, label in rule.antecedents:
        try:
            degree = fuzzified[var_name][label]
        except KeyError:
            raise UnknownLabelError(
                f"rule references {label!r} on variable {var_name!r}, "
                "which is not among the fuzzified degrees"
            ) from None
        strength = min(strength, degree)
    return strength


def aggregate_and_defuzz(system: FuzzySystem, strengths: Sequence[tuple[Rule, float]]) -> float:
    """Centroid of the clipped-max aggregate of the fired consequents.

    Raises NoFiringError when the aggregate is identically zero; callers
    decide the fallback (``infer`` substitutes the output range midpoint).
    """
    if len(strengths) == len(system.rules) and all(
        given == rule for (given, _), rule in zip(strengths, system.rules)
    ):
        vec = np.array([s for _, s in strengths], dtype=np.float64)
    else:
        lookup = {rule: s for rule, s in strengths}
        if any(rule not in lookup for rule in system.rules):
            raise ValueError("strengths must cover every rule of the system")
        vec = np.array([lookup[rule] for rule in system.rules], dtype=np.float64)
    value, mass = _kernels.clipped_max_centroid(system._consequent_curves, vec, system._grid)
    if mass <= 0.0:
        raise NoFiringError("no rule fired; aggregated output curve is identically zero")
    return float(value)


def infer_detailed(system: FuzzySystem, values: Mapping[str, float]) -> tuple[float, bool]:
    """Run the full pipeline; returns (crisp output, fired flag).

    ``fired`` is False when no rule fired, in which case the output is
    the midpoint of the output range.
    """
    fuzzified = {}
    for var in system.inputs:
        if var.name not in values:
            raise MissingInputError(f"missing input {var.name!r}")
        fuzzified[var.name] = fuzzify(var, values[var.name])
    strengths = [(rule, fire_rule(rule, fuzzified)) for rule in system.rules]
    try:
        return aggregate_and_defuzz(system, strengths), True
    except NoFiringError:
        return 0.5 * (system.output.low + system.output.high), False


def infer(system: FuzzySystem, values: Mapping[str, float]) -> float:
    """Crisp output for the given inputs (midpoint fallback on no firing)."""
    return infer_detailed(system, values)[0]


def validate_system(system: FuzzySystem) -> list[str]:
    """All invariant violations of the system, empty when well formed."""
    out: list[str] = []
    for var in system.inputs:
        out.extend(var.violations())
    out.extend(system.output.violations())
    names = [v.name for v in system.inputs]
    if len(set(names)) != len(names):
        out.append(f"duplicate input variable names: {names}")
    if not system.rules:
        out.append("system has no rules")
    if system.output.name in names:
        out.append(f"output variable {system.output.name!r} shadows an input")
    if system.grid_points < MIN_GRID_POINTS:
        out.append(f"grid_points must be >= {MIN_GRID_POINTS}, got {system.grid_points}")
    by_name = {v.name: v for v in system.inputs}
    for i, rule in enumerate(system.rules):
        if not rule.antecedents:
            out.append(f"rule {i}: empty antecedent list")
        for var_name, label in rule.antecedents:
            var = by_name.get(var_name)
            if var is None:
                out.append(f"rule {i}: unknown input variable {var_name!r}")
            elif label not in var.mfs:
                out.append(f"rule {i}: variable {var_name!r} has no label {label!r}")
        out_var, out_label = rule.consequent
        if out_var != system.output.name:
            out.append(f"rule {i}: consequent variable {out_var!r} is not the output")
        elif out_label not in system.output.mfs:
            out.append(f"rule {i}: output has no label {out_label!r}")
    return out
