"""Statistical cross-checks: stream proximity, least squares, summaries."""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np


def stream_sq_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Squared Euclidean distance between two equal-length streams."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"streams must be 1-D and equal length, got {a.shape} vs {b.shape}")
    d = a - b
    return float((d * d).sum())


@dataclass(frozen=True)
class RegressionResult:
    intercept: float
    coefficients: dict[str, float]
    r_squared: float

    def to_dict(self) -> dict:
        return {
            "intercept": self.intercept,
            "coefficients": dict(self.coefficients),
            "r_squared": self.r_squared,
        }


def ols_fit(X, y, feature_names: Sequence[str] | None = None) -> RegressionResult:
    """Ordinary least squares of ``y`` on ``X`` plus an intercept.

    Uses an SVD-backed solver, so the normal equations are solved
    stably.  A constant target has no variance to explain: by policy the
    fit is then the intercept alone with R squared 0.  Rank-deficient
    regressors raise, naming the dependent columns.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or len(X) != len(y):
        raise ValueError("X must be (n, p) and y length n")
    n, p = X.shape
    if n <= p + 1:
        raise ValueError(f"need more than {p + 1} rows to fit {p} regressors, got {n}")
    if feature_names is None:
        feature_names = [f"x{i}" for i in range(p)]
    feature_names = list(feature_names)

    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0.0:
        return RegressionResult(float(y.mean()), {f: 0.0 for f in feature_names}, 0.0)

    aug = np.column_stack([np.ones(n), X])
    rank = np.linalg.matrix_rank(aug)
    if rank < p + 1:
        dependent = []
        for j in range(p):
            without = np.delete(aug, j + 1, axis=1)
            if np.linalg.matrix_rank(without) == rank:
                dependent.append(feature_names[j])
        raise ValueError(f"rank-deficient regressors; dependent columns: {dependent}")

    beta, *_ = np.linalg.lstsq(aug, y, rcond=None)
    residuals = y - aug @ beta
    r2 = 1.0 - float((residuals**2).sum()) / ss_tot
    return RegressionResult(
        float(beta[0]),
        {name: float(b) for name, b in zip(feature_names, beta[1:])},
        r2,
    )


@dataclass(frozen=True)
class SummaryReport:
    size: int
    counts: dict[str, int]
    class_means: dict[str, float]
    mean: float
    median: float

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "counts": dict(self.counts),
            "class_means": dict(self.class_means),
            "mean": self.mean,
            "median": self.median,
        }

    def to_text(self) -> str:
        lines = [f"samples: {self.size}"]
        for label in sorted(self.counts):
            share = self.counts[label] / self.size * 100.0
            lines.append(
                f"  {label}: {self.counts[label]} ({share:.1f}%), "
                f"mean output {self.class_means[label]:.4g}"
            )
        lines.append(f"overall mean {self.mean:.4g}, median {self.median:.4g}")
        return "\n".join(lines)


def summarize(ds) -> SummaryReport:
    """Per-class counts and means plus overall mean and median."""
    if not ds.rows:
        raise ValueError("cannot summarize an empty dataset")
    finals = ds.finals()
    labels = ds.labels()
    if any(l is None for l in labels):
        raise ValueError("dataset has unlabelled rows")
    counts: dict[str, int] = {}
    sums: dict[str, float] = {}
    for value, label in zip(finals, labels):
        counts[label] = counts.get(label, 0) + 1
        sums[label] = sums.get(label, 0.0) + value
    return SummaryReport(
        size=len(finals),
        counts=counts,
        class_means={k: sums[k] / counts[k] for k in counts},
        mean=float(statistics.fmean(finals)),
        median=float(statistics.median(finals)),
    )
