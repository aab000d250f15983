"""First-order reference-continuation tests: the algebraic profile, the
characteristics oracle, and the rigidity of the jump condition."""

import math

import numpy as np
import pytest

from ndeshock.euler import (EulerParams, euler_F, euler_characteristics,
                            euler_rh_symmetry, shock_value)


def test_params_validation():
    EulerParams(0.3)
    for bad_alpha in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            EulerParams(bad_alpha)
    with pytest.raises(ValueError):
        EulerParams(0.3, C0=0.0)


def test_profile_solves_algebraic_relation():
    p = EulerParams(0.25, C0=1.4)
    for y in (0.0, -0.3, -2.0, -40.0):
        F = euler_F(y, p)
        assert F > 0.0
        assert F ** p.beta / (F - y) ** p.alpha == (
            pytest.approx(p.C0 ** p.beta, rel=1e-11))


def test_profile_far_field_power_law():
    p = EulerParams(0.25, C0=1.4)
    y = -1e6
    lead = p.C0 * (-y) ** p.alpha_over_beta
    assert euler_F(y, p) == pytest.approx(lead, rel=1e-3)


def test_characteristics_route_agrees_with_profile():
    # u(x, t) = t^alpha * F(x/t^beta) must reproduce the fixed point of
    # the characteristics map u = C0*(u*t - x)^(alpha/beta).
    p = EulerParams(0.3, C0=0.9)
    for x, t in ((-1.0, 0.5), (-0.2, 2.0), (-3.0, 1.0)):
        via_profile = t ** p.alpha * euler_F(x / t ** p.beta, p)
        via_chars = euler_characteristics(x, t, p)
        assert via_chars == pytest.approx(via_profile, rel=1e-8)


def test_shock_trace_power_law():
    p = EulerParams(0.2, C0=1.1)
    assert shock_value(1.0, p) == pytest.approx(p.C0 ** p.beta, rel=1e-14)
    assert shock_value(4.0, p) / shock_value(1.0, p) == (
        pytest.approx(4.0 ** p.alpha, rel=1e-14))
    with pytest.raises(ValueError):
        shock_value(-1.0, p)


def test_rh_condition_forces_antisymmetry():
    # Flux u^2/2: zero shock speed means (F0^- + F0^+)/2 = 0, a unique
    # right state -- no one-parameter family here.
    for F0 in (0.3, 1.0, 2.7):
        F0_plus = euler_rh_symmetry(F0)
        assert F0_plus == -F0
        assert 0.5 * (F0 + F0_plus) == 0.0
