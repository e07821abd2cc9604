"""Independent reference implementations used only by the tests.

Deliberately written from the closed forms, not from the package code,
so they can serve as a brute-force oracle for the inference pipeline.
"""
import numpy as np


def trapezoid_ref(x, a, b, c, d):
    x = np.asarray(x, dtype=float)
    left = np.where(x >= a, 1.0, 0.0) if a == b else (x - a) / (b - a)
    right = np.where(x <= d, 1.0, 0.0) if c == d else (d - x) / (d - c)
    return np.maximum(np.minimum(np.minimum(left, 1.0), right), 0.0)


def z_spline_ref(x, a, b):
    x = np.asarray(x, dtype=float)
    mid = (a + b) / 2.0
    return np.where(
        x <= a,
        1.0,
        np.where(
            x <= mid,
            1.0 - 2.0 * ((x - a) / (b - a)) ** 2,
            np.where(x <= b, 2.0 * ((b - x) / (b - a)) ** 2, 0.0),
        ),
    )


def s_spline_ref(x, a, b):
    return 1.0 - z_spline_ref(x, a, b)


def generalized_bell_ref(x, a, b, c):
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + np.abs((x - c) / a) ** (2.0 * b))


def gaussian_ref(x, sigma, c):
    x = np.asarray(x, dtype=float)
    return np.exp(-((x - c) ** 2) / (2.0 * sigma**2))


REF_BY_SHAPE = {
    "trapezoid": trapezoid_ref,
    "z_spline": z_spline_ref,
    "s_spline": s_spline_ref,
    "generalized_bell": generalized_bell_ref,
    "gaussian": gaussian_ref,
}


def eval_ref(mf, x):
    """Evaluate a package MembershipFunction via the reference formulas."""
    return REF_BY_SHAPE[mf.shape](x, *mf.params)


def brute_centroid(system, strengths, n=1_000_001):
    """Plain fine-grid Mamdani centroid for one system's rule firing.

    ``strengths`` is one value per rule, in system rule order.  Returns
    NaN when nothing fires.
    """
    xs = np.linspace(system.output.low, system.output.high, n)
    agg = np.zeros(n)
    for rule, strength in zip(system.rules, strengths):
        mf = system.output.mfs[rule.consequent[1]]
        agg = np.maximum(agg, np.minimum(eval_ref(mf, xs), strength))
    total = agg.sum()
    if total <= 0.0:
        return float("nan")
    return float((xs * agg).sum() / total)
