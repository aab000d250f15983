"""First-order conservation-law reference: unique continuation for
u_t + u*u_x = 0.

With the same power-law blow-up data, the continuation profile solves a
scalar algebraic equation F^beta/(F+|y|)^alpha = C0^beta (here beta = 1+alpha,
the first-order scaling).  The method-of-characteristics fixed point
u = C0*(u*t - x)^(alpha/beta) is kept as an independent oracle: the two
routes must agree through u(x,t) = t^alpha * F(x/t^beta).  The
Rankine-Hugoniot condition lambda = (F0^- + F0^+)/2 = 0 forces the
anti-symmetric pairing, which is exactly the rigidity the third-order
equation lacks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EulerParams",
    "euler_F",
    "euler_characteristics",
    "euler_rh_symmetry",
    "shock_value",
]


@dataclass(frozen=True)
class EulerParams:
    """First-order similarity exponents: beta = 1 + alpha exactly."""

    alpha: float
    C0: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        if self.C0 <= 0.0:
            raise ValueError("C0 must be positive")

    @property
    def beta(self) -> float:
        return 1.0 + self.alpha

    @property
    def alpha_over_beta(self) -> float:
        return self.alpha / (1.0 + self.alpha)


def _bisect_increasing(g, lo: float, hi: float, target: float,
                       tol: float) -> float:
    """Root of increasing g on [lo, hi] with g(root) = target, expanding
    the bracket upward if needed."""
    for _ in range(200):
        if g(hi) >= target:
            break
        hi = lo + 2.0 * (hi - lo)
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        val = g(mid)
        if abs(val - target) <= tol and hi - lo <= 1e-14 * max(1.0, mid):
            return mid
        if val < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def euler_F(y: float, p: EulerParams) -> float:
    """Continuation profile: the unique positive root of
    F^beta/(F+|y|)^alpha = C0^beta.

    The map is strictly increasing in F > 0, so a bisection on an
    analytic bracket suffices; residual is driven below 1e-12.
    """
    if y > 0.0:
        raise ValueError("profile is defined on y <= 0")
    ay = -y
    target = p.C0 ** p.beta

    def g(F: float) -> float:
        return F ** p.beta / (F + ay) ** p.alpha if ay > 0.0 else F

    if ay == 0.0:
        return target
    lo = target * (1.0 - 1e-15)
    hi = target + p.C0 * ay ** p.alpha_over_beta + 1.0
    return _bisect_increasing(g, min(lo, hi), hi, target, 1e-13 * target)


def euler_characteristics(x: float, t: float, p: EulerParams) -> float:
    """Characteristics route: solve u = C0*(u*t - x)^(alpha/beta) by
    bisection.  Brute-force oracle for euler_F via u = t^alpha*F(x/t^beta)."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if x > 0.0:
        raise ValueError("defined on x <= 0")
    q = p.alpha_over_beta

    def h(u: float) -> float:
        return u - p.C0 * (u * t - x) ** q

    lo = 0.0
    hi = max(1.0, 2.0 * p.C0 * max(1.0, (t - x)) ** q)
    for _ in range(200):
        if h(hi) > 0.0:
            break
        hi *= 2.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if h(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def shock_value(t: float, p: EulerParams) -> float:
    """Closed-form shock trace u(0^-, t) = C0^beta * t^alpha."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    return p.C0 ** p.beta * t ** p.alpha


def euler_rh_symmetry(F0_minus: float) -> float:
    """Zero-speed Rankine-Hugoniot for the first-order flux:
    lambda = (F0^- + F0^+)/2 = 0 uniquely forces F0^+ = -F0^-."""
    return -F0_minus
