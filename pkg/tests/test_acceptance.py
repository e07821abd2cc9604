"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report.
"""
import math
import random

import numpy as np

from autometric import (
    ControlState,
    FuzzySystem,
    VirtuousClass,
    aggregate_and_defuzz,
    classify_takeover,
    control_transition,
    evaluate,
    eval_mf,
    extract_rules,
    infer,
    kfold_eval,
    ols_fit,
    resubstitution_accuracy,
    stream_sq_distance,
    summarize,
    train,
)
from autometric.membership import (
    MembershipFunction,
    gaussian,
    generalized_bell,
    s_spline,
    trapezoid,
    z_spline,
)
from autometric.nnge import TrainingError

from oracle import brute_centroid

# Reference statistics the canonical takeover run must reproduce.
REFERENCE_SHARES = {"class0": 73.7, "class1": 6.5, "class2": 19.8}
REFERENCE_MEANS = {"class0": 4.69, "class1": 5.50, "class2": 6.48}


def _report(number, name, detail=""):
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {number:02d} {name}: PASS{suffix}")


def test_criterion_01_membership_closed_forms():
    table = [
        (trapezoid(0, 0, 40, 80), 20.0, 1.0),
        (trapezoid(0, 0, 40, 80), 40.0, 1.0),
        (trapezoid(0, 0, 40, 80), 60.0, 0.5),
        (trapezoid(0, 0, 40, 80), 80.0, 0.0),
        (trapezoid(5, 6, 10, 10), 5.5, 0.5),
        (trapezoid(0, 0, 8, 9), 8.5, 0.5),
        (z_spline(7, 10), 8.5, 0.5),
        (z_spline(4, 8), 6.0, 0.5),
        (z_spline(1, 10), 5.5, 0.5),
        (s_spline(4, 7), 5.5, 0.5),
        (s_spline(2, 6), 4.0, 0.5),
        (s_spline(1, 5.5), 3.25, 0.5),
        (s_spline(4, 7), 4.75, 0.125),
        (z_spline(7, 10), 9.25, 0.125),
        (generalized_bell(4.5, 3, 1), 1.0, 1.0),
        (generalized_bell(4.5, 2.5, 10), 5.5, 0.5),
        (gaussian(1, 7), 7.0, 1.0),
        (gaussian(1, 3), 4.0, math.exp(-0.5)),
    ]
    assert len(table) >= 12
    for mf, x, expected in table:
        assert abs(eval_mf(mf, x) - expected) <= 1e-9, (mf, x)
    _report(1, "membership closed forms", f"{len(table)} points at 1e-9")


def test_criterion_02_centroid_against_brute_force(takeover_arch):
    rng = np.random.default_rng(2024)
    systems = [stage.system for stage in takeover_arch.stages]
    worst = 0.0
    for trial in range(50):
        system = systems[trial % len(systems)]
        strengths = rng.uniform(0.0, 1.0, size=len(system.rules))
        if trial % 5 == 0:
            strengths[rng.integers(len(strengths))] = 0.0
        if not strengths.any():
            strengths[0] = 0.5
        paired = list(zip(system.rules, strengths))
        got = aggregate_and_defuzz(system, paired)
        want = brute_centroid(system, strengths)
        worst = max(worst, abs(got - want))
    assert worst <= 1e-3
    _report(2, "1001-point centroid vs 1e6-point oracle", f"worst |err| = {worst:.2e}")


def test_criterion_03_corner_semantics(takeover_arch):
    high = evaluate(takeover_arch, {"distance": 10, "lane": 10, "speed": 100}).final
    assert classify_takeover(high) is VirtuousClass.CLASS2
    low = evaluate(takeover_arch, {"distance": 1, "lane": 1, "speed": 0}).final
    assert classify_takeover(low) is VirtuousClass.CLASS0
    grey = infer(takeover_arch.stage("vmec").system, {"tcrw": 5.5, "tcgb": 5.5})
    assert classify_takeover(grey) is VirtuousClass.CLASS1
    _report(3, "corner semantics", f"high={high:.3f} low={low:.3f} grey={grey:.3f}")


def _shares(ds):
    labels = ds.labels()
    return {c: 100.0 * labels.count(c) / len(labels) for c in REFERENCE_SHARES}


def test_criterion_04_distribution_shape(canonical_takeover_run):
    shares = _shares(canonical_takeover_run)
    assert shares["class0"] > shares["class2"] > shares["class1"]
    for cls, expected in REFERENCE_SHARES.items():
        assert abs(shares[cls] - expected) <= 10.0, (cls, shares[cls])
    _report(
        4,
        "class distribution",
        "/".join(f"{shares[c]:.1f}%" for c in ("class0", "class1", "class2")),
    )


def test_criterion_05_per_class_means(canonical_takeover_run):
    report = summarize(canonical_takeover_run)
    means = report.class_means
    assert means["class0"] < means["class1"] < means["class2"]
    for cls, expected in REFERENCE_MEANS.items():
        assert abs(means[cls] - expected) <= 0.4, (cls, means[cls])
    _report(
        5,
        "per-class means",
        "/".join(f"{means[c]:.2f}" for c in ("class0", "class1", "class2")),
    )


def test_criterion_06_stream_proximity(canonical_takeover_run):
    ds = canonical_takeover_run
    finals = ds.finals()
    d_rw = stream_sq_distance(finals, [r.stage_outputs["rightwrong"] for r in ds.rows])
    d_gb = stream_sq_distance(finals, [r.stage_outputs["goodbad"] for r in ds.rows])
    assert d_rw < d_gb
    _report(6, "stream proximity", f"d(vmec,rw)={d_rw:.1f} < d(vmec,gb)={d_gb:.1f}")


def test_criterion_07_regression(canonical_takeover_run):
    ds = canonical_takeover_run
    features = ds.default_features()
    fit = ols_fit(ds.feature_matrix(features), ds.finals(), features)
    assert fit.r_squared >= 0.9
    magnitudes = {k: abs(v) for k, v in fit.coefficients.items()}
    assert max(magnitudes, key=magnitudes.get) == "goodbad"
    _report(
        7,
        "regression",
        f"R^2={fit.r_squared:.3f}, coef(goodbad)={fit.coefficients['goodbad']:+.3f}",
    )


def test_criterion_08_rule_induction(canonical_takeover_run):
    ds = canonical_takeover_run
    features = ds.default_features()
    X = ds.feature_matrix(features)
    labels = ds.labels()
    model = train(X, labels, features)
    resub = resubstitution_accuracy(model, X, labels)
    assert resub == 1.0
    cv = kfold_eval(X, labels, k=10, seed=1, feature_names=features)
    assert cv.mean_accuracy >= 0.95
    class2_rules = [r for r in extract_rules(model, min_covered=2) if r.label == "class2"]
    top = class2_rules[0]
    assert top.intervals["distance"][0] >= 4
    assert top.intervals["lane"][0] >= 7
    assert top.intervals["speed"][0] >= 60
    _report(
        8,
        "rule induction",
        f"resub=100%, cv={cv.mean_accuracy * 100:.1f}%, "
        f"class2 lows=({top.intervals['distance'][0]:.2f}, "
        f"{top.intervals['lane'][0]:.2f}, {top.intervals['speed'][0]:.2f})",
    )


def test_criterion_09_dilemma_run(canonical_dilemma_run, dilemma_arch):
    ds, median = canonical_dilemma_run
    report = summarize(ds)
    assert 5.0 <= report.mean <= 6.0
    assert 5.5 <= report.median <= 6.5
    young = evaluate(dilemma_arch, {"straight": 10, "swerve": 1, "pedestrian": 1}).final
    old = evaluate(dilemma_arch, {"straight": 2, "swerve": 9, "pedestrian": 9}).final
    assert young >= median  # swerve class
    assert old < median  # straight-ahead class
    _report(
        9,
        "dilemma run",
        f"mean={report.mean:.2f}, median={report.median:.2f}, "
        f"young probe={young:.2f}, old probe={old:.2f}",
    )


TRIALS = 1000


def _random_mf(rng) -> MembershipFunction:
    shape = ("trapezoid", "z_spline", "s_spline", "generalized_bell", "gaussian")[
        rng.randrange(5)
    ]
    if shape == "trapezoid":
        return trapezoid(*sorted(rng.uniform(-50, 50) for _ in range(4)))
    if shape in ("z_spline", "s_spline"):
        a = rng.uniform(-50, 50)
        return MembershipFunction(shape, (a, a + rng.uniform(0.01, 50)))
    if shape == "generalized_bell":
        return generalized_bell(rng.uniform(0.1, 20), rng.uniform(0.1, 8), rng.uniform(-50, 50))
    return gaussian(rng.uniform(0.05, 20), rng.uniform(-50, 50))


def test_criterion_10_property_suites(takeover_arch):
    rng = random.Random(424242)

    for _ in range(TRIALS):  # membership boundedness
        degree = eval_mf(_random_mf(rng), rng.uniform(-100, 100))
        assert 0.0 <= degree <= 1.0

    for _ in range(TRIALS):  # spline complementarity
        a = rng.uniform(-50, 50)
        b = a + rng.uniform(0.01, 50)
        x = rng.uniform(-100, 100)
        total = eval_mf(z_spline(a, b), x) + eval_mf(s_spline(a, b), x)
        assert abs(total - 1.0) <= 1e-12

    systems = [stage.system for stage in takeover_arch.stages]
    for i in range(TRIALS):  # centroid range containment
        system = systems[i % len(systems)]
        strengths = [rng.random() for _ in system.rules]
        if max(strengths) <= 0.0:
            strengths[0] = 1.0
        value = aggregate_and_defuzz(system, list(zip(system.rules, strengths)))
        assert system.output.low <= value <= system.output.high

    rw = takeover_arch.stage("rightwrong").system
    doubled = FuzzySystem(rw.inputs, rw.output, rw.rules, grid_points=2 * rw.grid_points)
    bound = 10.0 * (rw.output.high - rw.output.low) / rw.grid_points
    for _ in range(TRIALS):  # grid refinement stability
        probe = {
            "distance": rng.uniform(1, 10),
            "lane": rng.uniform(1, 10),
            "speed": rng.uniform(1, 100),
        }
        assert abs(infer(rw, probe) - infer(doubled, probe)) < bound

    for trial in range(TRIALS):  # no wrong-class containment, perfect resubstitution
        n = rng.randrange(6, 14)
        X = np.array([[rng.uniform(0, 10), rng.uniform(0, 10)] for _ in range(n)]).round(2)
        y = [("a", "b", "c")[rng.randrange(3)] for _ in range(n)]
        seen = {}
        for i, vec in enumerate(map(tuple, X)):
            if vec in seen:
                y[i] = y[seen[vec]]
            seen[vec] = i
        try:
            model = train(X, y)
        except TrainingError:  # duplicate guard should never trip after dedup
            raise AssertionError("unexpected training conflict")
        assert resubstitution_accuracy(model, X, y) == 1.0
        for box in model.exemplars:
            for vec, label in zip(X, y):
                if box.label != label:
                    assert not box.contains(np.asarray(vec, dtype=float))

    states = list(ControlState)
    classes = list(VirtuousClass)
    for _ in range(TRIALS):  # control transition fixed point
        state = states[rng.randrange(2)]
        cls = classes[rng.randrange(3)]
        once = control_transition(state, cls)
        assert control_transition(once, cls) is once
        if cls is VirtuousClass.CLASS1:
            assert once is state

    _report(10, "property suites", f"6 suites x {TRIALS} trials")
