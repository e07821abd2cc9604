"""Nearest-neighbor-with-generalization learning of interval rules.

Examples stream in one at a time.  Each is classified against the
current exemplars; a same-class nearest exemplar tries to grow its
hyperrectangle to absorb the example, a different-class outcome leaves
the example behind as a point exemplar.  Hyperrectangles are never
allowed to contain a training example of another class: growth that
would swallow one is rejected, and any box caught containing the new
example is shrunk away from it.  The net effect is a model that
classifies its own training data perfectly and reads off as a list of
interval rules.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class TrainingError(ValueError):
    """Raised for unlearnable input, e.g. duplicate vectors with two labels."""


@dataclass
class Hyperrectangle:
    """Closed per-feature intervals with a class label.

    A point exemplar is the degenerate case lows == highs.  ``covered``
    counts the training examples inside the final box.
    """

    lows: np.ndarray
    highs: np.ndarray
    label: str
    covered: int = 1

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lows) and np.all(x <= self.highs))

    def is_point(self) -> bool:
        return bool(np.all(self.lows == self.highs))

    def intervals(self, feature_names: Sequence[str]) -> dict[str, tuple[float, float]]:
        return {
            name: (float(lo), float(hi))
            for name, lo, hi in zip(feature_names, self.lows, self.highs)
        }


@dataclass
class NngeModel:
    feature_names: tuple[str, ...]
    range_lows: np.ndarray
    range_highs: np.ndarray
    widths: np.ndarray  # normalization widths; zero-width ranges widened to 1
    exemplars: list[Hyperrectangle] = field(default_factory=list)

    @property
    def classes(self) -> set[str]:
        return {h.label for h in self.exemplars}


def exemplar_distance(
    x: Sequence[float], h: Hyperrectangle, ranges: Sequence[tuple[float, float]]
) -> float:
    """Range-normalized Euclidean distance from a point to a box.

    Per-feature deviation is zero inside the interval and the distance
    to the nearer edge outside, divided by the feature's range width.
    """
    x = np.asarray(x, dtype=float)
    widths = np.array([hi - lo for lo, hi in ranges], dtype=float)
    if np.any(widths <= 0):
        bad = [i for i, w in enumerate(widths) if w <= 0]
        raise ValueError(f"zero-width feature range at index {bad}; distances undefined")
    return _distance(x, h, widths)


def _distance(x: np.ndarray, h: Hyperrectangle, widths: np.ndarray) -> float:
    dev = np.where(x < h.lows, h.lows - x, np.where(x > h.highs, x - h.highs, 0.0)) / widths
    return float(math.sqrt(float((dev * dev).sum())))


def _nearest(exemplars: list[Hyperrectangle], x: np.ndarray, widths: np.ndarray) -> int:
    """Index of the nearest exemplar; ties go to the earliest inserted."""
    best_i = 0
    best_d = _distance(x, exemplars[0], widths)
    for i in range(1, len(exemplars)):
        d = _distance(x, exemplars[i], widths)
        if d < best_d:
            best_i, best_d = i, d
    return best_i


def classify(model: NngeModel, x: Sequence[float]) -> str:
    """Label of the nearest exemplar."""
    if not model.exemplars:
        raise ValueError("cannot classify with an empty model")
    x = np.asarray(x, dtype=float)
    return model.exemplars[_nearest(model.exemplars, x, model.widths)].label


def _shrink_away(box: Hyperrectangle, x: np.ndarray, members: np.ndarray) -> None:
    """Pull one face of ``box`` past ``x`` so the box no longer contains it.

    Candidate moves snap a bound to the nearest member coordinate beyond
    ``x`` so at least one member stays inside.  The move losing the least
    volume wins; ties go to the lowest feature index, then to moving the
    upper bound.
    """
    n_features = len(x)
    widths = box.highs - box.lows
    if members.size:
        inside = members[
            np.all(members >= box.lows, axis=1) & np.all(members <= box.highs, axis=1)
        ]
    else:
        inside = members.reshape(0, n_features)
    best = None  # (lost_volume, axis, side, new_bound)
    for i in range(n_features):
        rest = float(np.prod(np.delete(widths, i))) if n_features > 1 else 1.0
        above = inside[inside[:, i] > x[i], i] if inside.size else np.empty(0)
        below = inside[inside[:, i] < x[i], i] if inside.size else np.empty(0)
        if above.size:
            new_lo = float(above.min())
            cand = ((new_lo - float(box.lows[i])) * rest, i, 1, new_lo)
            if best is None or cand[:3] < best[:3]:
                best = cand
        if below.size:
            new_hi = float(below.max())
            cand = ((float(box.highs[i]) - new_hi) * rest, i, 0, new_hi)
            if best is None or cand[:3] < best[:3]:
                best = cand
    if best is None:
        raise TrainingError(
            "cannot separate example from an exemplar of another class; "
            "the data contains conflicting duplicates"
        )
    _, axis, side, bound = best
    if side == 1:
        box.lows[axis] = bound
    else:
        box.highs[axis] = bound


def train(
    samples, labels: Sequence[str], feature_names: Sequence[str] | None = None
) -> NngeModel:
    """Learn a model from an ordered stream of labelled feature vectors.

    Order matters: generalization is incremental.  Constant features get
    a unit normalization width so single-point datasets still classify.
    Raises TrainingError when two identical vectors carry different
    labels, naming the offending pair.
    """
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise TrainingError("training data must be a nonempty 2-D array")
    y = [str(l) for l in labels]
    if len(y) != len(X):
        raise TrainingError(f"{len(X)} samples but {len(y)} labels")
    if feature_names is None:
        feature_names = tuple(f"f{i}" for i in range(X.shape[1]))
    feature_names = tuple(feature_names)
    if len(feature_names) != X.shape[1]:
        raise TrainingError("feature_names length does not match the sample width")

    seen_label: dict[tuple, str] = {}
    for i, (vec, label) in enumerate(zip(X, y)):
        key = tuple(vec)
        if seen_label.get(key, label) != label:
            raise TrainingError(
                f"conflicting duplicate examples: row {i} is {label!r} but an "
                f"identical earlier row is {seen_label[key]!r}"
            )
        seen_label[key] = label

    lows = X.min(axis=0)
    highs = X.max(axis=0)
    widths = np.where(highs > lows, highs - lows, 1.0)
    model = NngeModel(
        feature_names=feature_names, range_lows=lows, range_highs=highs, widths=widths
    )

    for idx in range(len(X)):
        x, label = X[idx], y[idx]
        if model.exemplars:
            near = model.exemplars[_nearest(model.exemplars, x, widths)]
            if near.label == label:
                _try_generalize(near, x, X[:idx], y[:idx], label, model)
            else:
                model.exemplars.append(Hyperrectangle(x.copy(), x.copy(), label))
            # No box of another class may keep containing this example.
            for box in model.exemplars:
                if box.label != label and box.contains(x):
                    same = X[:idx][[lab == box.label for lab in y[:idx]]]
                    _shrink_away(box, x, same)
        else:
            model.exemplars.append(Hyperrectangle(x.copy(), x.copy(), label))

    _repair(model, X, y)
    for box in model.exemplars:
        box.covered = int(sum(box.contains(vec) for vec in X))
    return model


def _try_generalize(
    near: Hyperrectangle, x, prior_X, prior_y, label: str, model: NngeModel
) -> None:
    cand_lows = np.minimum(near.lows, x)
    cand_highs = np.maximum(near.highs, x)
    for vec, other in zip(prior_X, prior_y):
        if other != label and np.all(vec >= cand_lows) and np.all(vec <= cand_highs):
            model.exemplars.append(Hyperrectangle(x.copy(), x.copy(), label))
            return
    near.lows = cand_lows
    near.highs = cand_highs


def _repair(model: NngeModel, X, y) -> None:
    # Shrinks can strand an example outside every same-class box; give
    # such examples their own point exemplar until resubstitution is clean.
    for _ in range(len(X)):
        fixed_any = False
        for vec, label in zip(X, y):
            if classify(model, vec) != label:
                model.exemplars.append(Hyperrectangle(vec.copy(), vec.copy(), label))
                fixed_any = True
        if not fixed_any:
            return


@dataclass(frozen=True)
class IntervalRule:
    """One hyperrectangle rendered as interval conditions and a verdict."""

    intervals: dict[str, tuple[float, float]]
    label: str
    covered: int

    def to_dict(self) -> dict:
        return {
            "intervals": {k: [lo, hi] for k, (lo, hi) in self.intervals.items()},
            "class": self.label,
            "covered": self.covered,
        }


def extract_rules(model: NngeModel, min_covered: int = 2) -> list[IntervalRule]:
    """Interval rules for every exemplar covering at least ``min_covered``
    training examples, widest coverage first."""
    rules = [
        IntervalRule(
            intervals=h.intervals(model.feature_names), label=h.label, covered=h.covered
        )
        for h in model.exemplars
        if h.covered >= min_covered
    ]
    rules.sort(key=lambda r: -r.covered)
    return rules


def format_rule(rule: IntervalRule, scales: dict[str, float] | None = None) -> str:
    """Render a rule as text; degenerate intervals render as equalities.

    ``scales`` multiplies the displayed bounds of named features, for
    channels recorded in scaled units (e.g. pedestrian age in decades).
    """
    scales = scales or {}
    parts = []
    for name, (lo, hi) in rule.intervals.items():
        k = scales.get(name, 1.0)
        lo, hi = lo * k, hi * k
        if lo == hi:
            parts.append(f"({name} = {lo:g})")
        else:
            parts.append(f"({lo:g} <= {name} <= {hi:g})")
    return f"IF {' AND '.join(parts)} THEN {rule.label}  [covered={rule.covered}]"


@dataclass(frozen=True)
class KFoldResult:
    fold_accuracies: tuple[float, ...]
    mean_accuracy: float


def kfold_eval(
    samples,
    labels: Sequence[str],
    k: int,
    seed: int,
    feature_names: Sequence[str] | None = None,
) -> KFoldResult:
    """Seeded shuffle, k contiguous folds, train on k-1 and test on one."""
    X = np.asarray(samples, dtype=float)
    n = len(X)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"dataset of {n} rows cannot be split into {k} folds")
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    folds = [list(part) for part in np.array_split(indices, k)]
    y = [str(l) for l in labels]
    accuracies = []
    for held in range(k):
        test_idx = folds[held]
        train_idx = [i for f, fold in enumerate(folds) if f != held for i in fold]
        model = train(X[train_idx], [y[i] for i in train_idx], feature_names)
        hits = sum(classify(model, X[i]) == y[i] for i in test_idx)
        accuracies.append(hits / len(test_idx))
    return KFoldResult(tuple(accuracies), float(np.mean(accuracies)))


def resubstitution_accuracy(model: NngeModel, samples, labels: Sequence[str]) -> float:
    X = np.asarray(samples, dtype=float)
    hits = sum(classify(model, x) == str(l) for x, l in zip(X, labels))
    return hits / len(X)


def train_on_dataset(ds, features: Iterable[str] | None = None):
    """Convenience: train from a labelled simulation dataset.

    Returns (model, feature name list, matrix, labels).
    """
    names = list(features) if features is not None else ds.default_features()
    labels = ds.labels()
    if any(l is None for l in labels):
        raise TrainingError("dataset has unlabelled rows; label it first")
    X = ds.feature_matrix(names)
    return train(X, labels, names), names, X, labels
