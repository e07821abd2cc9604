"""Membership function shapes and their closed-form evaluation.

Five shapes are supported:

    trapezoid         [a, b, c, d]   flat top between b and c
    z_spline          [a, b]         falling spline shoulder (1 -> 0)
    s_spline          [a, b]         rising spline shoulder (0 -> 1)
    generalized_bell  [a, b, c]      width a, slope b, center c
    gaussian          [sigma, c]     peak 1 at c

A trapezoid with a coincident edge pair (a == b or c == d) is a step
shoulder: the degree is 1 on the flat side of the step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

TRAPEZOID = "trapezoid"
Z_SPLINE = "z_spline"
S_SPLINE = "s_spline"
GENERALIZED_BELL = "generalized_bell"
GAUSSIAN = "gaussian"

SHAPES = (TRAPEZOID, Z_SPLINE, S_SPLINE, GENERALIZED_BELL, GAUSSIAN)

PARAM_COUNTS = {
    TRAPEZOID: 4,
    Z_SPLINE: 2,
    S_SPLINE: 2,
    GENERALIZED_BELL: 3,
    GAUSSIAN: 2,
}

# Integer codes shared with the grid kernels (see _kernels).
SHAPE_CODES = {shape: i for i, shape in enumerate(SHAPES)}


def shape_violations(shape: str, params: tuple[float, ...]) -> list[str]:
    """Return human-readable invariant violations, empty when valid."""
    out: list[str] = []
    if shape not in PARAM_COUNTS:
        return [f"unknown shape {shape!r}"]
    if len(params) != PARAM_COUNTS[shape]:
        return [f"{shape} takes {PARAM_COUNTS[shape]} parameters, got {len(params)}"]
    if not all(math.isfinite(p) for p in params):
        return [f"{shape} parameters must be finite: {params}"]
    if shape == TRAPEZOID:
        a, b, c, d = params
        if not (a <= b <= c <= d):
            out.append(f"trapezoid requires a <= b <= c <= d, got {params}")
    elif shape in (Z_SPLINE, S_SPLINE):
        a, b = params
        if not a < b:
            out.append(f"{shape} requires a < b, got {params}")
    elif shape == GENERALIZED_BELL:
        a, b, _ = params
        if a <= 0:
            out.append(f"generalized_bell width must be positive, got {a}")
        if b <= 0:
            out.append(f"generalized_bell slope must be positive, got {b}")
    elif shape == GAUSSIAN:
        sigma = params[0]
        if sigma <= 0:
            out.append(f"gaussian sigma must be positive, got {sigma}")
    return out


@dataclass(frozen=True)
class MembershipFunction:
    """A parameterized curve mapping a crisp value to a degree in [0, 1].

    Pass ``check=False`` to defer validation (used when loading untrusted
    configs so that ``validate_system`` can report every problem at once).
    """

    shape: str
    params: tuple[float, ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.check:
            problems = self.violations()
            if problems:
                raise ValueError("; ".join(problems))

    def violations(self) -> list[str]:
        return shape_violations(self.shape, self.params)

    def evaluate(self, x: float) -> float:
        """Degree of membership of ``x``, always in [0, 1]."""
        return eval_mf(self, x)


def _trapezoid(x: float, a: float, b: float, c: float, d: float) -> float:
    if a == b:
        left = 1.0 if x >= a else 0.0
    else:
        left = (x - a) / (b - a)
    if c == d:
        right = 1.0 if x <= d else 0.0
    else:
        right = (d - x) / (d - c)
    return max(0.0, min(left, 1.0, right))


def _z_spline(x: float, a: float, b: float) -> float:
    if x <= a:
        return 1.0
    if x >= b:
        return 0.0
    t = (x - a) / (b - a)
    if x <= (a + b) / 2.0:
        return 1.0 - 2.0 * t * t
    u = (b - x) / (b - a)
    return 2.0 * u * u


def eval_mf(mf: MembershipFunction, x: float) -> float:
    """Evaluate a membership function at a crisp value."""
    p = mf.params
    if mf.shape == TRAPEZOID:
        return _trapezoid(x, *p)
    if mf.shape == Z_SPLINE:
        return _z_spline(x, *p)
    if mf.shape == S_SPLINE:
        return 1.0 - _z_spline(x, *p)
    if mf.shape == GENERALIZED_BELL:
        a, b, c = p
        return 1.0 / (1.0 + abs((x - c) / a) ** (2.0 * b))
    if mf.shape == GAUSSIAN:
        sigma, c = p
        z = (x - c) / sigma
        return math.exp(-0.5 * z * z)
    raise ValueError(f"unknown shape {mf.shape!r}")


def trapezoid(a, b, c, d) -> MembershipFunction:
    return MembershipFunction(TRAPEZOID, (a, b, c, d))


def z_spline(a, b) -> MembershipFunction:
    return MembershipFunction(Z_SPLINE, (a, b))


def s_spline(a, b) -> MembershipFunction:
    return MembershipFunction(S_SPLINE, (a, b))


def generalized_bell(a, b, c) -> MembershipFunction:
    return MembershipFunction(GENERALIZED_BELL, (a, b, c))


def gaussian(sigma, c) -> MembershipFunction:
    return MembershipFunction(GAUSSIAN, (sigma, c))
