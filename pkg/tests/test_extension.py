"""Extension-profile tests: shooting, exact scaling symmetry, tail
normalization, and input validation.

Pinned numbers are frozen from independent high-precision runs (a second
integrator with tolerances tightened until the digits stopped moving).
"""

import numpy as np
import pytest

from ndeshock.blowup import SimilarityParams
from ndeshock.extension import (CauchyTriple, FamilyMember, ShotKind,
                                extension_operator_residual, normalize_to_C0,
                                shoot)

ALPHA = 0.1
# Separatrix slope for the slice F0 = 1, F2 = 0 at alpha = 0.1, and the
# far-field constant of the matched approximation.
F1_STAR = -0.257696598
C0_STAR = 1.2079627


@pytest.fixture(scope="module")
def unit_shot():
    params = SimilarityParams(ALPHA)
    return shoot(params, {"F0": 1.0, "F2": 0.0}, "F1", (-2.0, -1e-6))


def test_cubic_is_an_exact_solution():
    # F(y) = -y^3/60 satisfies the continuation equation for every alpha.
    for alpha in (-0.05, 0.0, 0.1, 0.3, 0.45):
        p = SimilarityParams(alpha)
        for y in (-7.0, -1.0, -0.2):
            F, Fp, Fpp, F3 = (-y ** 3 / 60.0, -y ** 2 / 20.0,
                              -y / 10.0, -0.1)
            assert extension_operator_residual(p, y, F, Fp, Fpp, F3) == (
                pytest.approx(0.0, abs=1e-12))


def test_cauchy_triple_validation():
    CauchyTriple(1.0, -0.5, 2.0)
    with pytest.raises(ValueError):
        CauchyTriple(-1.0, -0.5, 0.0)
    with pytest.raises(ValueError):
        CauchyTriple(1.0, 0.5, 0.0)


def test_pinned_separatrix_slope(unit_shot):
    assert unit_shot.tuned_value == pytest.approx(F1_STAR, rel=1e-6)
    assert unit_shot.classification.kind == ShotKind.MATCHED
    assert unit_shot.tail.C0 == pytest.approx(C0_STAR, rel=1e-3)
    assert unit_shot.tail.residual < 1e-3


def test_bracket_endpoints_straddle(unit_shot):
    lo, hi = unit_shot.bracket
    assert lo < unit_shot.tuned_value < hi
    assert hi - lo <= 1e-11


def test_scaling_symmetry_of_tuned_slope(unit_shot):
    # F |-> a^3 F(./a) maps solutions to solutions and the Cauchy data as
    # (F0, F1, F2) -> (a^3 F0, a^2 F1, a F2).  The separatrix slope at
    # F0 = 0.1 must therefore equal a^2 times the unit-slice slope with
    # a = 0.1^(1/3); shooting at F0 = 0.1 independently checks this.
    params = SimilarityParams(ALPHA)
    small = shoot(params, {"F0": 0.1, "F2": 0.0}, "F1", (-2.0, -1e-6))
    a = 0.1 ** (1.0 / 3.0)
    assert small.tuned_value == pytest.approx(
        a ** 2 * unit_shot.tuned_value, rel=1e-4)
    # The far-field constant scales with exponent 3 - alpha/beta.
    p = params.alpha_over_beta
    assert small.tail.C0 == pytest.approx(
        a ** (3.0 - p) * unit_shot.tail.C0, rel=1e-3)


def test_normalize_to_unit_C0(unit_shot):
    member = normalize_to_C0(FamilyMember(1.0, unit_shot), 1.0)
    assert member.result.tail.C0 == pytest.approx(1.0, abs=1e-4)
    # Predicted amplitude from the scaling exponent of C0.
    p = unit_shot.params.alpha_over_beta
    a = unit_shot.tail.C0 ** (-1.0 / (3.0 - p))
    assert member.result.triple.F0 == pytest.approx(a ** 3, rel=1e-3)
