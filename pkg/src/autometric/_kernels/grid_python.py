"""NumPy implementation of the grid kernels.

Used as the fallback when the compiled extension is unavailable and as
the reference the extension is tested against.
"""
from __future__ import annotations

import numpy as np

# Shape codes, kept in sync with membership.SHAPE_CODES.
TRAPEZOID, Z_SPLINE, S_SPLINE, GENERALIZED_BELL, GAUSSIAN = range(5)

NAME = "python"


def eval_mf_array(code: int, params, xs: np.ndarray) -> np.ndarray:
    """Evaluate one membership function over an array of points."""
    xs = np.asarray(xs, dtype=np.float64)
    if code == TRAPEZOID:
        a, b, c, d = params
        left = np.where(xs >= a, 1.0, 0.0) if a == b else (xs - a) / (b - a)
        right = np.where(xs <= d, 1.0, 0.0) if c == d else (d - xs) / (d - c)
        return np.maximum(np.minimum(np.minimum(left, 1.0), right), 0.0)
    if code in (Z_SPLINE, S_SPLINE):
        a, b = params
        mid = 0.5 * (a + b)
        t = (xs - a) / (b - a)
        u = (b - xs) / (b - a)
        z = np.where(
            xs <= a,
            1.0,
            np.where(xs <= mid, 1.0 - 2.0 * t * t, np.where(xs <= b, 2.0 * u * u, 0.0)),
        )
        return z if code == Z_SPLINE else 1.0 - z
    if code == GENERALIZED_BELL:
        a, b, c = params
        return 1.0 / (1.0 + np.abs((xs - c) / a) ** (2.0 * b))
    if code == GAUSSIAN:
        sigma, c = params
        z = (xs - c) / sigma
        return np.exp(-0.5 * z * z)
    raise ValueError(f"unknown shape code {code}")


def clipped_max_centroid(curves: np.ndarray, strengths: np.ndarray, xs: np.ndarray):
    """Centroid of the pointwise max over rules of min(strength, curve).

    ``curves`` has one row per rule, sampled on the grid ``xs``.  The two
    endpoint samples carry half weight (composite trapezoid rule), which
    keeps the 1001-point centroid within ~1e-5 of a brute-force fine grid.
    Returns ``(centroid, aggregate_mass)``; a mass of 0.0 signals that no
    rule fired and the centroid is then NaN.
    """
    if len(curves) == 0:
        return float("nan"), 0.0
    agg = np.max(np.minimum(curves, strengths[:, None]), axis=0)
    agg[0] *= 0.5
    agg[-1] *= 0.5
    mass = float(agg.sum())
    if mass <= 0.0:
        return float("nan"), 0.0
    return float((xs * agg).sum() / mass), mass
