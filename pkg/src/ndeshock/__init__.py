"""Numerical toolkit for self-similar gradient blow-up and post-blow-up
shock continuations of the third-order dispersive equation
``u_t = (u u_x)_xx``.

Submodules
----------
odeint
    Embedded Runge-Kutta 5(4) integrator with dense output and events.
blowup
    Pre-blow-up similarity profiles, far-field oscillatory asymptotics.
extension
    Post-blow-up similarity profiles, shooting, families, nonexistence.
shocks
    Jump conditions, speed selection, free-boundary closure.
euler
    First-order (inviscid Burgers-type) reference continuation.
regpde
    Fourth-order regularized evolution on a half-line.
cli
    ``nde-shock`` command-line front end.
acceptance
    Packaged self-verification suite.
"""

from .blowup import (OriginSeed, ParameterRangeError, ProfileError,
                     SimilarityParams, TailAsymptotics, TailFitError,
                     solve_blowup_profile, solve_collapse_profile)
from .extension import (CauchyTriple, Family, FamilyMember, ShootConfig,
                        ShootError, ShootingResult, ShotKind, family_sweep,
                        nonexistence_scan, normalize_to_C0, shoot)
from .shocks import (FBPCondition, SelectionError, ShockSide, fbp_kappa,
                     rh_speed, select_fbp_profile)
from .euler import EulerParams, euler_F, euler_characteristics
from .regpde import Grid, build_grid, evolve, sqrt_initial_field

__version__ = "0.1.0"

__all__ = [
    "CauchyTriple", "EulerParams", "FBPCondition", "Family", "FamilyMember",
    "Grid", "OriginSeed", "ParameterRangeError", "ProfileError",
    "SelectionError", "ShockSide", "ShootConfig", "ShootError",
    "ShootingResult", "ShotKind", "SimilarityParams", "TailAsymptotics",
    "TailFitError", "build_grid", "euler_F", "euler_characteristics",
    "evolve", "family_sweep", "fbp_kappa", "nonexistence_scan",
    "normalize_to_C0", "rh_speed", "select_fbp_profile", "shoot",
    "solve_blowup_profile", "solve_collapse_profile", "sqrt_initial_field",
]
