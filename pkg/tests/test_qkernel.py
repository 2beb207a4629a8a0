import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from qesmatch.qkernel import (
    DeformationParam, Regime, classical_limit_check, classical_number, qnumber,
)

taus_real = st.floats(min_value=1e-4, max_value=3.0)
taus_phase = st.floats(min_value=1e-4, max_value=math.pi - 0.1)
xs = st.floats(min_value=-20.0, max_value=20.0)


@pytest.mark.parametrize("regime", list(Regime))
def test_zero_maps_to_zero(regime):
    assert qnumber(0.0, DeformationParam(regime, 0.3)) == 0.0


def test_real_q_two_is_q_plus_inverse():
    assert qnumber(2, DeformationParam(Regime.REAL_Q, math.log(2.0))) == pytest.approx(2.5, rel=1e-14)


def test_phase_q_three_at_pi_over_six():
    assert qnumber(3, DeformationParam(Regime.PHASE_Q, math.pi / 6)) == pytest.approx(2.0, rel=1e-14)


def test_matches_high_precision_definition():
    # (q^x - q^-x)/(q - q^-1) evaluated directly with complex q at 50 digits
    mpmath.mp.dps = 50
    for regime, tau in ((Regime.REAL_Q, 0.37), (Regime.PHASE_Q, 0.37)):
        q = mpmath.exp(tau) if regime is Regime.REAL_Q else mpmath.exp(1j * mpmath.mpf(tau))
        x = mpmath.mpf("4.25")
        ref = (q ** x - q ** (-x)) / (q - 1 / q)
        assert qnumber(4.25, DeformationParam(regime, tau)) == pytest.approx(
            float(mpmath.re(ref)), rel=1e-13)


@pytest.mark.parametrize("kwargs, exc", [
    ({"regime": Regime.REAL_Q, "tau": 0.0}, ValueError),
    ({"regime": Regime.REAL_Q, "tau": -0.1}, ValueError),
    ({"regime": Regime.PHASE_Q, "tau": math.pi}, ValueError),
    ({"regime": Regime.REAL_Q, "tau": float("nan")}, ValueError),
    ({"regime": "real", "tau": 0.1}, TypeError),
])
def test_invalid_deformation(kwargs, exc):
    with pytest.raises(exc):
        DeformationParam(**kwargs)


def test_classical_number():
    assert classical_number(3) == 3.0


def test_limit_phase_monotone():
    rep = classical_limit_check(5.0, DeformationParam(Regime.PHASE_Q, 1e-2), taus=[1e-2, 1e-3, 1e-4])
    assert rep.monotone
    assert rep.final_deviation < 1e-6


@pytest.mark.parametrize("regime", list(Regime))
def test_limit_unit_is_exact(regime):
    rep = classical_limit_check(1.0, DeformationParam(regime, 0.5), steps=5)
    assert all(s.deviation < 1e-15 for s in rep.steps)


def test_limit_real_q_bound():
    x, tau = 7.5, 1e-4
    bound = tau ** 2 / 6 * (x ** 3 - x)
    rep = classical_limit_check(x, DeformationParam(Regime.REAL_Q, tau), steps=1)
    assert rep.final_deviation < 1e-6
    assert rep.final_deviation == pytest.approx(bound, rel=1e-3)
    assert rep.converged


def test_limit_rejects_bad_input():
    d = DeformationParam(Regime.REAL_Q, 0.1)
    with pytest.raises(ValueError):
        classical_limit_check(float("inf"), d)
    with pytest.raises(ValueError):
        classical_limit_check(1.0, d, steps=0)


@given(x=xs, tau=taus_real)
def test_antisymmetry_real(x, tau):
    d = DeformationParam(Regime.REAL_Q, tau)
    assert qnumber(-x, d) == -qnumber(x, d)


@given(x=xs, tau=taus_phase)
def test_antisymmetry_phase(x, tau):
    d = DeformationParam(Regime.PHASE_Q, tau)
    assert qnumber(-x, d) == -qnumber(x, d)


@given(tau=taus_real, regime=st.sampled_from(list(Regime)))
def test_unit_is_one(tau, regime):
    if regime is Regime.PHASE_Q and tau >= math.pi:
        return
    assert qnumber(1.0, DeformationParam(regime, tau)) == pytest.approx(1.0, abs=1e-15)


@given(x=st.floats(min_value=1.0, max_value=20.0), tau=taus_real)
def test_real_q_expands(x, tau):
    # sinh is convex on x > 0, so [x] >= x for x >= 1
    assert qnumber(x, DeformationParam(Regime.REAL_Q, tau)) >= x * (1 - 1e-12)


@given(x=st.floats(min_value=1.0, max_value=20.0), tau=st.floats(min_value=1e-4, max_value=0.07))
def test_phase_q_contracts(x, tau):
    # tau x < pi/2 keeps sin concave on the range
    assert qnumber(x, DeformationParam(Regime.PHASE_Q, tau)) <= x * (1 + 1e-12)


@given(x=xs)
def test_regimes_agree_near_identity(x):
    tau = 1e-5
    diff = qnumber(x, DeformationParam(Regime.REAL_Q, tau)) - qnumber(x, DeformationParam(Regime.PHASE_Q, tau))
    # leading term of sinh/sinh - sin/sin is tau^2 (x^3 - x) / 3
    assert diff == pytest.approx(tau ** 2 * (x ** 3 - x) / 3, abs=1e-12)
    if abs(x) <= 6:
        assert abs(diff) < 1e-8
