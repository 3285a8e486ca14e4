import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracrm import special as S
from diracrm.errors import (
    ArgumentOutOfRange,
    DivergentAtOne,
    InvalidC,
    NonConvergent,
    PoleAtNonPositiveInteger,
)

LN2X2 = 2.0 * math.log(2.0)


def rel(x, y, floor=1.0):
    return abs(x - y) / max(floor, abs(y))


# -- gauss_2f1 ---------------------------------------------------------------

def test_zero_argument_is_one():
    assert S.gauss_2f1(3.7, -1.2, 2.5, 0.0).value == 1.0


def test_log_closed_form():
    assert S.gauss_2f1(1, 1, 2, 0.5).value.real == pytest.approx(LN2X2, rel=1e-15)


def test_conjugate_pair_is_real():
    v = S.gauss_2f1(0.5 + 2j, 0.5 - 2j, 3, 0.4).value
    assert abs(v.imag) < 1e-13
    assert abs(v.imag) <= 1e-12 * abs(v)


def test_matches_mpmath_on_random_tuples():
    rng = np.random.default_rng(11)
    for _ in range(200):
        a, b = rng.uniform(-10, 10, 2)
        c = rng.uniform(0.5, 20)
        z = rng.uniform(0, 0.9)
        ref = complex(mp.hyp2f1(a, b, c, z))
        assert rel(S.gauss_2f1(a, b, c, z).value, ref) < 1e-12


def test_error_estimate_is_reported():
    res = S.gauss_2f1(2.5, 1.5, 3.0, 0.6)
    assert res.terms_used >= 1
    assert 0 <= res.abs_error_estimate <= 1e-13 * abs(res.value)


def test_invalid_c():
    for c in (0, -1, -3.0):
        with pytest.raises(InvalidC):
            S.gauss_2f1(1, 1, c, 0.2)


def test_term_cap():
    with pytest.raises(NonConvergent):
        S.gauss_2f1(1.5, 2.5, 1.1, 0.99, max_terms=50)


def test_near_unit_argument_rejected():
    with pytest.raises(ArgumentOutOfRange):
        S.gauss_2f1(1, 1, 2, 0.9995)
    with pytest.raises(ArgumentOutOfRange):
        S.gauss_2f1(1, 1, 2, -0.1)


def test_termination_bound():
    rng = np.random.default_rng(5)
    for _ in range(100):
        a, b = rng.uniform(-50, 50, 2)
        c = rng.uniform(0.1, 100)
        z = rng.uniform(0, 0.9)
        assert S.gauss_2f1(a, b, c, z).terms_used <= 100000


def test_series_on_grid_matches_scalar():
    z = np.linspace(0, 0.5, 17)
    grid = S.series_on_grid(3.2, -1.7, 2.4, z)
    scalar = [S.gauss_2f1(3.2, -1.7, 2.4, x).value.real for x in z]
    np.testing.assert_allclose(grid, scalar, rtol=1e-14)


# -- log_gamma ---------------------------------------------------------------

@pytest.mark.parametrize("x, expected", [
    (1, 0.0),
    (0.5, 0.5723649429247001),
    (5, 3.1780538303479458),
])
def test_log_gamma_values(x, expected):
    assert S.log_gamma(x).real == pytest.approx(expected, abs=1e-14)


def test_log_gamma_against_mpmath():
    rng = np.random.default_rng(3)
    for _ in range(300):
        x = complex(rng.uniform(-20, 100), rng.uniform(-30, 30))
        if abs(x) > 100:
            continue
        ref = complex(mp.loggamma(x))
        got = S.log_gamma(x)
        assert abs(got - ref) <= 1e-13 * max(1.0, abs(ref))


def test_log_gamma_poles():
    for x in (0, -1, -7):
        with pytest.raises(PoleAtNonPositiveInteger):
            S.log_gamma(x)
    assert S.rgamma(-2) == 0


# -- Gauss summation -------------------------------------------------------

def test_at_one_values():
    assert S.gauss_2f1_at_one(0.5, 0.5, 2).real == pytest.approx(4 / math.pi, rel=1e-14)
    assert S.gauss_2f1_at_one(0, 5, 1) == 1.0


def test_at_one_complex_pair_against_extrapolated_series():
    exact = S.gauss_2f1_at_one(1 + 1j, 1 - 1j, 4)
    assert abs(exact - complex(mp.hyp2f1(1 + 1j, 1 - 1j, 4, 1))) < 1e-13
    assert rel(S.extrapolate_to_one(1 + 1j, 1 - 1j, 4), exact) < 1e-6


def test_at_one_divergent():
    with pytest.raises(DivergentAtOne):
        S.gauss_2f1_at_one(1, 1, 2)
    with pytest.raises(DivergentAtOne):
        S.gauss_2f1_at_one(1.5, 1, 2)


# -- transformations -------------------------------------------------------

def test_transforms_at_log_point():
    assert S.transform_euler(1, 1, 2, 0.5).value.real == pytest.approx(LN2X2, rel=1e-14)
    assert S.transform_pfaff(1, 1, 2, 0.5).value.real == pytest.approx(LN2X2, rel=1e-14)


def test_euler_identity_chain_for_a_zero():
    for b, c, z in ((2.3, 1.7, 0.4), (-4.1, 6.0, 0.85)):
        assert S.transform_euler(0, b, c, z).value == pytest.approx(1.0, abs=1e-13)


def test_pfaff_at_zero():
    assert S.transform_pfaff(2.1, -3.3, 1.4, 0.0).value == 1.0


@settings(max_examples=150, deadline=None)
@given(
    a=st.floats(-10, 10), b=st.floats(-10, 10), c=st.floats(0.5, 20), z=st.floats(0, 0.9),
)
def test_transforms_agree_with_series(a, b, c, z):
    ref = S.gauss_2f1(a, b, c, z).value
    scale = max(1.0, abs(ref))
    assert abs(S.transform_euler(a, b, c, z).value - ref) <= 1e-10 * scale
    assert abs(S.transform_pfaff(a, b, c, z).value - ref) <= 1e-10 * scale


# -- derivative ------------------------------------------------------------

def test_derivative_examples():
    assert S.gauss_2f1_derivative(1, 1, 2, 0.0).value == pytest.approx(0.5)
    for z in (0.0, 0.3, 0.8):
        assert S.gauss_2f1_derivative(0, 2.2, 1.3, z).value == 0
    h = 1e-6
    fd = (S.gauss_2f1(1, 1, 2, 0.3 + h).value - S.gauss_2f1(1, 1, 2, 0.3 - h).value) / (2 * h)
    assert abs(S.gauss_2f1_derivative(1, 1, 2, 0.3).value - fd) < 1e-7


def test_derivative_against_finite_differences():
    rng = np.random.default_rng(8)
    h = 1e-6
    for _ in range(100):
        a, b = rng.uniform(-3, 3, 2)
        c = rng.uniform(0.5, 5)
        z = rng.uniform(0.05, 0.5)
        fd = (S.gauss_2f1(a, b, c, z + h).value - S.gauss_2f1(a, b, c, z - h).value) / (2 * h)
        assert abs(S.gauss_2f1_derivative(a, b, c, z).value - fd) < 1e-7


def test_second_derivative_against_mpmath():
    got = S.gauss_2f1_derivative(1.3, -0.7, 2.1, 0.35, order=2).value
    ref = complex(mp.diff(lambda t: mp.hyp2f1(1.3, -0.7, 2.1, t), 0.35, 2))
    assert abs(got - ref) < 1e-12


def test_pure_and_deterministic():
    first = S.transform_pfaff(3.3, -2.2, 4.4, 0.77)
    assert S.transform_pfaff(3.3, -2.2, 4.4, 0.77) == first
    assert cmath.isfinite(first.value)
