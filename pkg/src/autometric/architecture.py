"""Cascaded fuzzy reasoning stacks and the two canonical builds.

An architecture wires sensor channels into a first layer of reasoners
and feeds their crisp outputs forward into later stages; the terminal
stage output is the architecture's moral verdict.  The takeover stack
decides whether seizing control from the driver is the virtuous act;
the dilemma stack decides between braking straight ahead and swerving.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .fuzzy import (
    FuzzySystem,
    FuzzyVariable,
    MissingInputError,
    Rule,
    infer_detailed,
    validate_system,
)
from .membership import gaussian, generalized_bell, s_spline, trapezoid, z_spline

SENSOR = "sensor"
STAGE = "stage"


class VirtuousClass(enum.Enum):
    """Discrete moral outcome classes for the takeover verdict."""

    CLASS0 = "class0"  # below 5: no case for taking control
    CLASS1 = "class1"  # 5 to just under 6: grey state
    CLASS2 = "class2"  # 6 and above: taking control is virtuous

    @property
    def label(self) -> str:
        return self.value


class ControlState(enum.Enum):
    HUMAN = "human"
    IAV = "iav"


@dataclass(frozen=True)
class Stage:
    name: str
    system: FuzzySystem


@dataclass(frozen=True)
class EthicsArchitecture:
    """Sensors, ordered stages, and the wiring between them.

    ``wiring[stage][input_var]`` is ``(SENSOR, channel)`` or
    ``(STAGE, stage_name)``.  Immutable after construction; evaluation
    is pure and safe to run concurrently.
    """

    sensors: tuple[str, ...]
    stages: tuple[Stage, ...]
    wiring: Mapping[str, Mapping[str, tuple[str, str]]]

    def __post_init__(self):
        object.__setattr__(self, "sensors", tuple(self.sensors))
        object.__setattr__(self, "stages", tuple(self.stages))
        object.__setattr__(
            self,
            "wiring",
            {s: {v: (k, n) for v, (k, n) in m.items()} for s, m in self.wiring.items()},
        )

    def stage(self, name: str) -> Stage:
        for st in self.stages:
            if st.name == name:
                return st
        raise KeyError(f"no stage named {name!r}")

    def terminal_stage(self) -> str:
        """The unique stage whose output feeds no other stage."""
        fed = {
            src_name
            for stage_wiring in self.wiring.values()
            for kind, src_name in stage_wiring.values()
            if kind == STAGE
        }
        terminals = [st.name for st in self.stages if st.name not in fed]
        if len(terminals) != 1:
            raise ValueError(f"expected exactly one terminal stage, found {terminals}")
        return terminals[0]

    def evaluation_order(self) -> list[str]:
        """Stage names in dependency (topological) order."""
        deps = {
            st.name: {
                src for kind, src in self.wiring.get(st.name, {}).values() if kind == STAGE
            }
            for st in self.stages
        }
        order: list[str] = []
        ready = set()
        while len(order) < len(self.stages):
            progressed = False
            for st in self.stages:
                if st.name in ready:
                    continue
                if deps[st.name] <= ready:
                    order.append(st.name)
                    ready.add(st.name)
                    progressed = True
            if not progressed:
                raise ValueError("stage wiring contains a cycle")
        return order


@dataclass(frozen=True)
class EvaluationTrace:
    """Every intermediate of one architecture evaluation."""

    sensor_values: Mapping[str, float]
    stage_outputs: Mapping[str, float]
    final: float
    defaulted: frozenset[str] = field(default_factory=frozenset)  # stages where no rule fired


def validate_architecture(arch: EthicsArchitecture) -> list[str]:
    """Violations across all stages plus the wiring invariants."""
    out: list[str] = []
    names = [st.name for st in arch.stages]
    if len(set(names)) != len(names):
        out.append(f"duplicate stage names: {names}")
    for st in arch.stages:
        for problem in validate_system(st.system):
            out.append(f"stage {st.name!r}: {problem}")
    for st in arch.stages:
        wired = arch.wiring.get(st.name, {})
        for var in st.system.inputs:
            if var.name not in wired:
                out.append(f"stage {st.name!r}: input {var.name!r} is not wired")
        for var_name, (kind, src) in wired.items():
            if var_name not in {v.name for v in st.system.inputs}:
                out.append(f"stage {st.name!r}: wiring names unknown input {var_name!r}")
            if kind == SENSOR and src not in arch.sensors:
                out.append(f"stage {st.name!r}: unknown sensor channel {src!r}")
            elif kind == STAGE and src not in names:
                out.append(f"stage {st.name!r}: unknown source stage {src!r}")
            elif kind not in (SENSOR, STAGE):
                out.append(f"stage {st.name!r}: unknown wiring kind {kind!r}")
    try:
        arch.evaluation_order()
    except ValueError as exc:
        out.append(str(exc))
    try:
        arch.terminal_stage()
    except ValueError as exc:
        out.append(str(exc))
    return out


def evaluate(arch: EthicsArchitecture, sensors: Mapping[str, float]) -> EvaluationTrace:
    """Run the cascade on one set of sensor readings."""
    for channel in arch.sensors:
        if channel not in sensors:
            raise MissingInputError(f"missing sensor channel {channel!r}")
    stage_outputs: dict[str, float] = {}
    defaulted = set()
    for name in arch.evaluation_order():
        stage = arch.stage(name)
        values = {}
        for var_name, (kind, src) in arch.wiring[name].items():
            values[var_name] = sensors[src] if kind == SENSOR else stage_outputs[src]
        out, fired = infer_detailed(stage.system, values)
        stage_outputs[name] = out
        if not fired:
            defaulted.add(name)
    final = stage_outputs[arch.terminal_stage()]
    return EvaluationTrace(
        sensor_values={c: float(sensors[c]) for c in arch.sensors},
        stage_outputs=stage_outputs,
        final=final,
        defaulted=frozenset(defaulted),
    )


def classify_takeover(vmec_out: float) -> VirtuousClass:
    """Map the meta-controller output to its outcome class."""
    if vmec_out < 5.0:
        return VirtuousClass.CLASS0
    if vmec_out < 6.0:
        return VirtuousClass.CLASS1
    return VirtuousClass.CLASS2


def control_transition(state: ControlState, cls: VirtuousClass) -> ControlState:
    """Takeover and hand-back rule.

    The machine takes over only on a class-2 verdict and hands control
    back only once the verdict drops to class 0; the grey class never
    forces a transition.
    """
    if state is ControlState.HUMAN and cls is VirtuousClass.CLASS2:
        return ControlState.IAV
    if state is ControlState.IAV and cls is VirtuousClass.CLASS0:
        return ControlState.HUMAN
    return state


def _risk_inputs() -> tuple[FuzzyVariable, ...]:
    # the two first-layer reasoners share these sensor variables
    return (
        FuzzyVariable("distance", 1, 10, {
            "lowrisk": trapezoid(0, 0, 5, 6),
            "highrisk": trapezoid(5, 6, 10, 10),
        }),
        FuzzyVariable("lane", 1, 10, {
            "lowrisk": trapezoid(0, 0, 8, 9),
            "highrisk": trapezoid(7, 8, 10, 10),
        }),
        FuzzyVariable("speed", 1, 100, {
            "lowrisk": trapezoid(0, 0, 40, 80),
            "highrisk": trapezoid(40, 80, 100, 100),
        }),
    )


def _all_risk_rule(out_var: str, out_label: str, risk: str) -> Rule:
    return Rule(
        antecedents=(("distance", risk), ("lane", risk), ("speed", risk)),
        consequent=(out_var, out_label),
    )


def build_takeover_architecture(grid_points: int | None = None) -> EthicsArchitecture:
    """The three-stage stack deciding whether to take control.

    Stage one judges duty (is taking control right or wrong), stage two
    judges consequences for the driver's autonomy (good or bad), and the
    meta controller combines the two into the virtuous verdict.
    """
    kw = {} if grid_points is None else {"grid_points": grid_points}
    rightwrong = FuzzySystem(
        inputs=_risk_inputs(),
        output=FuzzyVariable("tcrightwrong", 1, 10, {
            "tcwrong": z_spline(7, 10),
            "tcright": s_spline(4, 7),
        }),
        rules=(
            _all_risk_rule("tcrightwrong", "tcwrong", "lowrisk"),
            _all_risk_rule("tcrightwrong", "tcright", "highrisk"),
        ),
        **kw,
    )
    goodbad = FuzzySystem(
        inputs=_risk_inputs(),
        output=FuzzyVariable("tcgoodbad", 1, 10, {
            "tcbad": z_spline(4, 8),
            "tcgood": s_spline(2, 6),
        }),
        rules=(
            _all_risk_rule("tcgoodbad", "tcbad", "lowrisk"),
            _all_risk_rule("tcgoodbad", "tcgood", "highrisk"),
        ),
        **kw,
    )
    vmec = FuzzySystem(
        inputs=(
            FuzzyVariable("tcrw", 1, 10, {
                "rwdtc": z_spline(1, 10),
                "rwtc": s_spline(1, 10),
            }),
            FuzzyVariable("tcgb", 1, 10, {
                "gbdtc": trapezoid(0, 0, 5, 6),
                "gbtc": trapezoid(5, 6, 10, 10),
            }),
        ),
        output=FuzzyVariable("control", 1, 10, {
            "vcno": z_spline(5.5, 10),
            "vcyes": s_spline(1, 5.5),
        }),
        rules=(
            Rule((("tcrw", "rwtc"), ("tcgb", "gbtc")), ("control", "vcyes")),
            Rule((("tcrw", "rwdtc"), ("tcgb", "gbdtc")), ("control", "vcno")),
        ),
        **kw,
    )
    return EthicsArchitecture(
        sensors=("distance", "lane", "speed"),
        stages=(
            Stage("rightwrong", rightwrong),
            Stage("goodbad", goodbad),
            Stage("vmec", vmec),
        ),
        wiring={
            "rightwrong": {
                "distance": (SENSOR, "distance"),
                "lane": (SENSOR, "lane"),
                "speed": (SENSOR, "speed"),
            },
            "goodbad": {
                "distance": (SENSOR, "distance"),
                "lane": (SENSOR, "lane"),
                "speed": (SENSOR, "speed"),
            },
            "vmec": {
                "tcrw": (STAGE, "rightwrong"),
                "tcgb": (STAGE, "goodbad"),
            },
        },
    )


def build_dilemma_architecture(grid_points: int | None = None) -> EthicsArchitecture:
    """The three-stage stack for the swerve-or-brake-straight dilemma.

    Duty weighs death risk straight ahead against death risk when
    swerving; consequence weighs the age of the pedestrian ahead; the
    controller trades the two off into a single decision value.
    """
    kw = {} if grid_points is None else {"grid_points": grid_points}

    def death_mfs():
        return {
            "lowriskdeath": trapezoid(0, 0, 2, 3),
            "highriskdeath": trapezoid(2, 3, 10, 10),
        }

    rightwrong = FuzzySystem(
        inputs=(
            FuzzyVariable("straight", 1, 10, death_mfs()),
            FuzzyVariable("swerve", 1, 10, death_mfs()),
        ),
        output=FuzzyVariable("rightwrong", 1, 10, {
            "swervewrong": z_spline(5, 6),
            "swerveright": s_spline(5, 6),
        }),
        rules=(
            Rule(
                (("straight", "highriskdeath"), ("swerve", "lowriskdeath")),
                ("rightwrong", "swerveright"),
            ),
            Rule(
                (("straight", "lowriskdeath"), ("swerve", "highriskdeath")),
                ("rightwrong", "swervewrong"),
            ),
        ),
        **kw,
    )
    goodbad = FuzzySystem(
        inputs=(
            FuzzyVariable("pedestrian", 1, 10, {
                "young": trapezoid(0, 0, 2, 3),
                "notyoung": trapezoid(2, 5, 10, 10),
            }),
        ),
        output=FuzzyVariable("avoid", 1, 10, {
            "avoidbad": z_spline(4, 8),
            "avoidgood": s_spline(2, 6),
        }),
        rules=(
            Rule((("pedestrian", "young"),), ("avoid", "avoidgood")),
            Rule((("pedestrian", "notyoung"),), ("avoid", "avoidbad")),
        ),
        **kw,
    )
    controller = FuzzySystem(
        inputs=(
            FuzzyVariable("deathrisk", 1, 10, {
                "riskdeathlow": generalized_bell(4.5, 3, 1),
                "riskdeathhigh": generalized_bell(4.5, 2.5, 10),
            }),
            FuzzyVariable("pedestrianrisk", 1, 10, {
                "avoidbad": generalized_bell(5, 2.5, 0),
                "avoidgood": generalized_bell(5, 2.5, 10),
            }),
        ),
        output=FuzzyVariable("dilemmadecision", 1, 10, {
            "straight_ahead": gaussian(1, 3),
            "swerve": gaussian(1, 7),
        }),
        rules=(
            Rule(
                (("deathrisk", "riskdeathhigh"), ("pedestrianrisk", "avoidgood")),
                ("dilemmadecision", "swerve"),
            ),
            Rule(
                (("deathrisk", "riskdeathlow"), ("pedestrianrisk", "avoidbad")),
                ("dilemmadecision", "straight_ahead"),
            ),
        ),
        **kw,
    )
    return EthicsArchitecture(
        sensors=("straight", "swerve", "pedestrian"),
        stages=(
            Stage("rightwrong", rightwrong),
            Stage("goodbad", goodbad),
            Stage("dilemma", controller),
        ),
        wiring={
            "rightwrong": {
                "straight": (SENSOR, "straight"),
                "swerve": (SENSOR, "swerve"),
            },
            "goodbad": {"pedestrian": (SENSOR, "pedestrian")},
            "dilemma": {
                "deathrisk": (STAGE, "rightwrong"),
                "pedestrianrisk": (STAGE, "goodbad"),
            },
        },
    )
