"""Jump-condition and free-boundary-condition tests (no shooting here;
the end-to-end selection runs in the acceptance suite)."""

import pytest

from ndeshock.blowup import SimilarityParams
from ndeshock.shocks import (FBPKind, ShockSide, check_symmetry_breaking,
                             fbp_kappa, jump_magnitude, rh_speed)


def _mirror(side: ShockSide) -> ShockSide:
    # Odd reflection of the profile through the shock position.
    return ShockSide(F0=-side.F0, F1=side.F1, F2=-side.F2)


def test_flux_combination():
    s = ShockSide(F0=2.0, F1=-1.5, F2=0.5)
    assert s.flux == pytest.approx(2.0 * 0.5 + 1.5 ** 2, rel=1e-15)


def test_antisymmetric_pair_has_zero_speed():
    minus = ShockSide(F0=0.8, F1=-0.26, F2=0.0)
    res = rh_speed(minus, _mirror(minus))
    assert res.lam == pytest.approx(0.0, abs=1e-14)
    assert res.residual == pytest.approx(0.0, abs=1e-14)


def test_speed_formula_general_pair():
    minus = ShockSide(F0=1.0, F1=-0.3, F2=0.2)
    plus = ShockSide(F0=-0.5, F1=-0.4, F2=-0.1)
    res = rh_speed(minus, plus)
    lam = -(plus.flux - minus.flux) / (plus.F0 - minus.F0)
    assert res.lam == pytest.approx(lam, rel=1e-14)


def test_zero_jump_rejected():
    s = ShockSide(F0=1.0, F1=-0.3, F2=0.2)
    with pytest.raises(ValueError):
        rh_speed(s, s)


def test_zero_speed_matching_admits_asymmetric_pairs():
    minus = ShockSide(F0=0.8, F1=-0.26, F2=0.1)
    holds, resid = check_symmetry_breaking(minus, _mirror(minus))
    assert holds and resid == pytest.approx(0.0, abs=1e-14)
    # A non-mirror pair with equal flux also satisfies the relation:
    # the third-order jump condition does not enforce anti-symmetry.
    skew = ShockSide(F0=-0.5, F1=-0.3,
                     F2=(minus.flux - 0.3 ** 2) / -0.5)
    holds, resid = check_symmetry_breaking(minus, skew)
    assert holds and resid <= 1e-14
    # And a flux mismatch is reported as a violation.
    holds, resid = check_symmetry_breaking(
        minus, ShockSide(F0=-0.5, F1=-0.3, F2=0.3))
    assert not holds and resid > 0.0


def test_fbp_kappa_classification():
    # kappa = F0*F2/F1^2; the zero-curvature member has kappa = 0.
    flat = fbp_kappa(ShockSide(F0=1.0, F1=-0.5, F2=0.0))
    assert flat.kappa == pytest.approx(0.0, abs=1e-15)
    curved = fbp_kappa(ShockSide(F0=2.0, F1=-1.0, F2=0.25))
    assert curved.kappa == pytest.approx(0.5, rel=1e-14)
    assert isinstance(flat.kind, FBPKind)


def test_defect_scales_like_fourth_power():
    # Under (F0, F1, F2) -> (a^3 F0, a^2 F1, a F2) the combination
    # F0*F2 - kappa*F1^2 is multiplied by exactly a^4, so the sign of the
    # condition defect is normalization-invariant.
    kappa = -0.7
    F0, F1, F2 = 1.3, -0.4, 0.2
    d1 = F0 * F2 - kappa * F1 ** 2
    a = 2.31
    d2 = (a ** 3 * F0) * (a * F2) - kappa * (a ** 2 * F1) ** 2
    assert d2 == pytest.approx(a ** 4 * d1, rel=1e-14)


def test_jump_magnitude_power_law():
    p = SimilarityParams(0.2)
    j1 = jump_magnitude(1.0, p, 1.0)
    j2 = jump_magnitude(1.0, p, 2.0)
    j4 = jump_magnitude(1.0, p, 4.0)
    assert j1 > 0.0
    assert j2 / j1 == pytest.approx(j4 / j2, rel=1e-12)
    with pytest.raises(ValueError):
        jump_magnitude(1.0, p, -1.0)
