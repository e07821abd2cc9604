import math

import pytest
from hypothesis import given, strategies as st

from autometric.membership import (
    SHAPE_CODES,
    SHAPES,
    MembershipFunction,
    eval_mf,
    gaussian,
    generalized_bell,
    s_spline,
    trapezoid,
    z_spline,
)
from autometric import _kernels
from autometric._kernels import grid_python

from oracle import eval_ref

# Hand-checkable closed-form points: (mf, x, expected degree).
CLOSED_FORM_TABLE = [
    (trapezoid(0, 0, 40, 80), 20.0, 1.0),
    (trapezoid(0, 0, 40, 80), 60.0, 0.5),
    (trapezoid(0, 0, 40, 80), 80.0, 0.0),
    (trapezoid(5, 6, 10, 10), 5.5, 0.5),
    (trapezoid(5, 6, 10, 10), 10.0, 1.0),
    (trapezoid(0, 0, 5, 6), 0.0, 1.0),
    (z_spline(7, 10), 8.5, 0.5),
    (z_spline(7, 10), 7.0, 1.0),
    (z_spline(7, 10), 10.0, 0.0),
    (s_spline(4, 7), 5.5, 0.5),
    (s_spline(4, 7), 4.75, 0.125),
    (z_spline(1, 10), 3.25, 0.875),
    (generalized_bell(4.5, 3, 1), 1.0, 1.0),
    (generalized_bell(4.5, 3, 1), 5.5, 0.5),
    (gaussian(1, 7), 7.0, 1.0),
    (gaussian(1, 7), 8.0, math.exp(-0.5)),
]


@pytest.mark.parametrize("mf,x,expected", CLOSED_FORM_TABLE)
def test_closed_form_points(mf, x, expected):
    assert eval_mf(mf, x) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize(
    "shape,params",
    [
        ("trapezoid", (5, 4, 3, 2)),
        ("trapezoid", (1, 2, 3)),
        ("z_spline", (3, 3)),
        ("s_spline", (5, 2)),
        ("generalized_bell", (0, 1, 5)),
        ("generalized_bell", (1, -2, 5)),
        ("gaussian", (0, 5)),
        ("gaussian", (-1, 5)),
        ("nonsense", (1, 2)),
    ],
)
def test_invalid_parameters_rejected_at_construction(shape, params):
    with pytest.raises(ValueError):
        MembershipFunction(shape, params)


def test_deferred_check_collects_violations():
    mf = MembershipFunction("trapezoid", (5, 4, 3, 2), check=False)
    assert len(mf.violations()) == 1


def test_degenerate_trapezoid_is_step_shoulder():
    left_step = trapezoid(0, 0, 5, 6)
    assert eval_mf(left_step, 0.0) == 1.0
    assert eval_mf(left_step, -0.5) == 0.0
    right_step = trapezoid(5, 6, 10, 10)
    assert eval_mf(right_step, 10.0) == 1.0
    assert eval_mf(right_step, 10.5) == 0.0


def _random_mf(draw):
    shape = draw(st.sampled_from(SHAPES))
    finite = st.floats(-50, 50)
    if shape == "trapezoid":
        pts = sorted(draw(st.tuples(finite, finite, finite, finite)))
        return MembershipFunction(shape, tuple(pts))
    if shape in ("z_spline", "s_spline"):
        a = draw(finite)
        b = draw(st.floats(0.01, 50))
        return MembershipFunction(shape, (a, a + b))
    if shape == "generalized_bell":
        return MembershipFunction(
            shape, (draw(st.floats(0.1, 20)), draw(st.floats(0.1, 8)), draw(finite))
        )
    return MembershipFunction(shape, (draw(st.floats(0.05, 20)), draw(finite)))


random_mfs = st.composite(_random_mf)()


@given(random_mfs, st.floats(-100, 100))
def test_membership_bounded(mf, x):
    assert 0.0 <= eval_mf(mf, x) <= 1.0


@given(
    st.floats(-50, 50),
    st.floats(0.01, 50),
    st.floats(-100, 100),
)
def test_spline_complementarity(a, width, x):
    b = a + width
    total = eval_mf(z_spline(a, b), x) + eval_mf(s_spline(a, b), x)
    assert total == pytest.approx(1.0, abs=1e-12)


@given(random_mfs, st.floats(-100, 100))
def test_scalar_matches_reference(mf, x):
    assert eval_mf(mf, x) == pytest.approx(float(eval_ref(mf, x)), abs=1e-12)


def test_trapezoid_edge_monotonicity():
    mf = trapezoid(2, 4, 6, 9)
    rising = [eval_mf(mf, x) for x in [2 + i * 0.1 for i in range(21)]]
    assert all(b >= a for a, b in zip(rising, rising[1:]))
    falling = [eval_mf(mf, x) for x in [6 + i * 0.1 for i in range(31)]]
    assert all(b <= a for a, b in zip(falling, falling[1:]))


@pytest.mark.parametrize("mf", [m for m, _, _ in CLOSED_FORM_TABLE[:8]] + [
    generalized_bell(4.5, 2.5, 10), gaussian(1, 3)
])
def test_vector_backends_match_scalar(mf):
    import numpy as np

    xs = np.linspace(-5, 110, 777)
    expected = np.array([eval_mf(mf, float(x)) for x in xs])
    code = SHAPE_CODES[mf.shape]
    got_py = grid_python.eval_mf_array(code, mf.params, xs)
    assert np.allclose(got_py, expected, atol=1e-12)
    try:
        cy = _kernels.load_backend("cython")
    except ImportError:
        pytest.skip("compiled kernel not built")
    got_cy = cy.eval_mf_array(code, mf.params, xs)
    assert np.allclose(got_cy, expected, atol=1e-12)
