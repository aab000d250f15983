"""Blow-up profile tests: operator identities, origin series, tail fit,
and the exact scaling family."""

import numpy as np
import pytest

from ndeshock.blowup import (CharacteristicRoots, OriginSeed,
                             ParameterRangeError, SimilarityParams,
                             blowup_operator_residual, characteristic_roots,
                             jump_at_time, origin_series_state,
                             rescale_profile, solve_blowup_profile,
                             wkbj_params)


def test_parameter_range_is_enforced():
    SimilarityParams(0.0)
    SimilarityParams(-0.1)
    SimilarityParams(0.499)
    for bad in (0.5, 0.7, -0.2, 1.0):
        with pytest.raises(ParameterRangeError):
            SimilarityParams(bad)


def test_beta_relation():
    p = SimilarityParams(0.2)
    assert p.beta == pytest.approx((1.0 + 0.2) / 3.0, rel=1e-15)
    assert p.alpha_over_beta == pytest.approx(0.2 / p.beta, rel=1e-15)


def test_cubic_is_an_exact_solution():
    # f(y) = y^3/60 satisfies the profile equation for every alpha:
    # (f f')'' = y^3/60 and the linear part contributes -y^3/60.
    for alpha in (-0.05, 0.0, 0.1, 0.3, 0.45):
        p = SimilarityParams(alpha)
        for y in (-7.0, -1.0, 0.5, 3.0):
            f, fp, fpp, f3 = (y ** 3 / 60.0, y ** 2 / 20.0,
                              y / 10.0, 0.1)
            assert blowup_operator_residual(p, y, f, fp, fpp, f3) == (
                pytest.approx(0.0, abs=1e-12))


def test_origin_series_consistency_with_ode():
    # The series state at delta must satisfy the profile equation to
    # O(delta^2) when the third derivative is reconstructed from it.
    p = SimilarityParams(0.3)
    seed = OriginSeed(A=-1.0, delta=1e-3)
    st = origin_series_state(p, seed)
    f3 = (p.beta * st.y * st.fp - p.alpha * st.f
          - 3.0 * st.fp * st.fpp) / st.f
    res = blowup_operator_residual(p, st.y, st.f, st.fp, st.fpp, f3)
    assert abs(res) < 1e-5 * abs(seed.A)


def test_origin_series_odd_symmetry():
    p = SimilarityParams(0.1)
    sm = origin_series_state(p, OriginSeed(A=-2.0, delta=1e-3))
    # f is built as an odd function: f(0)=f''(0)=0 means
    # f(-delta) ~ -A*delta + O(delta^3), f''(-delta) = O(delta).
    assert sm.f == pytest.approx(2.0 * 1e-3, rel=1e-5)
    assert abs(sm.fpp) < 1e-1 * abs(sm.fp)


def test_solved_profile_has_positive_tail_constant():
    p = SimilarityParams(0.3)
    traj, tail = solve_blowup_profile(p, OriginSeed(A=-1.0))
    assert tail.C0 > 0.0
    assert tail.residual < 1e-3
    # The far field follows C0*(-y)^(alpha/beta) to leading order.
    y = 0.9 * traj.ys[-1]
    lead = tail.C0 * (-y) ** p.alpha_over_beta
    assert traj(np.array([y]))[0, 0] == pytest.approx(lead, rel=0.05)


def test_rescale_profile_scales_derivatives():
    p = SimilarityParams(0.1)
    traj, _ = solve_blowup_profile(p, OriginSeed(A=-1.0), y_end=-30.0)
    a = 1.7
    scaled = rescale_profile(traj, p, a)
    ys = np.array([-2.0, -5.0, -10.0])
    orig = traj(ys / a)
    got = scaled(ys)
    np.testing.assert_allclose(got[:, 0], a ** 3 * orig[:, 0], rtol=1e-10)
    np.testing.assert_allclose(got[:, 1], a ** 2 * orig[:, 1], rtol=1e-10)
    np.testing.assert_allclose(got[:, 2], a * orig[:, 2], rtol=1e-10)


def test_characteristic_roots_satisfy_indicial_equation():
    # Linearizing about the cubic solution with a power y^m gives the
    # factored indicial polynomial (m - 3)*(m^2 + 9m - (2 + 20*alpha)).
    for alpha in (0.0, 0.1, 0.3):
        p = SimilarityParams(alpha)
        roots = characteristic_roots(p)
        assert len(roots.roots) == 3
        assert roots.roots[0] == 3.0
        for m in roots.roots[1:]:
            assert m ** 2 + 9.0 * m - (2.0 + 20.0 * alpha) == (
                pytest.approx(0.0, abs=1e-10))
        assert sum(roots.roots) == pytest.approx(-6.0, abs=1e-12)


def test_wkbj_params():
    p = SimilarityParams(0.1)
    gamma, omega = wkbj_params(p, 1.3)
    assert gamma == pytest.approx(1.0 + (1.0 - p.alpha_over_beta) / 2.0,
                                  rel=1e-12)
    assert omega == pytest.approx((p.beta / 1.3) ** 0.5 / gamma, rel=1e-12)


def test_jump_at_time_power_law():
    p = SimilarityParams(0.25)
    j1 = jump_at_time(1.0, p, -1.0)
    j2 = jump_at_time(1.0, p, -0.5)
    j3 = jump_at_time(1.0, p, -0.25)
    # Self-similar decay: the jump obeys an exact power law in |t|, so
    # successive halvings of |t| shrink it by the same factor.
    assert j1 > j2 > j3 > 0.0
    assert j2 / j1 == pytest.approx(j3 / j2, rel=1e-12)
    with pytest.raises(ValueError):
        jump_at_time(1.0, p, 0.5)
