"""Cascaded Mamdani fuzzy reasoning for vehicle control decisions.

The package covers the full loop: fuzzy inference over sensor channels,
two canonical cascaded reasoning stacks (takeover and dilemma), a
deterministic simulation harness that labels its own output streams,
interval-rule induction from those streams, and statistical checks.
"""

__version__ = "0.1.0"

from .analysis import RegressionResult, SummaryReport, ols_fit, stream_sq_distance, summarize
from .architecture import (
    ControlState,
    EthicsArchitecture,
    EvaluationTrace,
    Stage,
    VirtuousClass,
    build_dilemma_architecture,
    build_takeover_architecture,
    classify_takeover,
    control_transition,
    evaluate,
    validate_architecture,
)
from .fuzzy import (
    FuzzySystem,
    FuzzyVariable,
    MissingInputError,
    NoFiringError,
    Rule,
    UnknownLabelError,
    aggregate_and_defuzz,
    default_grid_points,
    fire_rule,
    fuzzify,
    infer,
    infer_detailed,
    validate_system,
)
from .membership import (
    MembershipFunction,
    eval_mf,
    gaussian,
    generalized_bell,
    s_spline,
    trapezoid,
    z_spline,
)
from .nnge import (
    Hyperrectangle,
    IntervalRule,
    KFoldResult,
    NngeModel,
    TrainingError,
    classify,
    exemplar_distance,
    extract_rules,
    format_rule,
    kfold_eval,
    resubstitution_accuracy,
    train,
    train_on_dataset,
)
from .simulate import (
    LabeledDataset,
    SampleRow,
    SignalGenerator,
    SimulationSchedule,
    canonical_dilemma_schedule,
    canonical_takeover_schedule,
    export_csv,
    label_dilemma,
    label_takeover,
    load_csv,
    run_simulation,
    signal_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
