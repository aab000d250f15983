"""Gradient blow-up similarity profiles for u_t = (u u_x)_xx.

The similarity ansatz u = (-t)^alpha f(x/(-t)^beta) with beta = (1+alpha)/3
reduces the PDE on t < 0 to the third-order profile equation

    (f f')'' - beta*y*f' + alpha*f = 0   on y < 0,

integrated here in normal form f''' = (beta*y*f' - alpha*f - 3 f' f'')/f
from a regular series at the origin.  The far field is a power law
C0*(-y)^(alpha/beta) carrying a slowly modulated oscillation whose phase
rate follows from a WKBJ exponential ansatz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .odeint import (EventSpec, OdeProblem, RhsFailure, TerminationKind,
                     Trajectory, integrate)

__all__ = [
    "ParameterRangeError",
    "ProfileError",
    "TailFitError",
    "SimilarityParams",
    "ProfileState",
    "OriginSeed",
    "TailAsymptotics",
    "CharacteristicRoots",
    "blowup_rhs",
    "blowup_operator_residual",
    "origin_series_state",
    "solve_blowup_profile",
    "solve_collapse_profile",
    "rescale_profile",
    "estimate_tail_C0",
    "characteristic_roots",
    "wkbj_params",
    "final_time_profile",
    "jump_at_time",
    "tail_phase_increments",
    "profile_events",
    "EXTINCTION_EVENT",
    "GROWTH_EVENT",
]

ALPHA_MIN = -0.1
ALPHA_MAX = 0.5

DEFAULT_Y_END = -200.0
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-10

EXTINCTION_EVENT = 1
GROWTH_EVENT = 2


class ParameterRangeError(ValueError):
    """Similarity exponent outside the admissible interval [-1/10, 1/2)."""


class ProfileError(RuntimeError):
    """Integration left the expected bundle (extinction or runaway growth)."""

    def __init__(self, message: str, trajectory: Trajectory | None = None):
        super().__init__(message)
        self.trajectory = trajectory


class TailFitError(RuntimeError):
    """Far-field fit could not be performed on the requested window."""


@dataclass(frozen=True)
class SimilarityParams:
    """Exponent pair (alpha, beta=(1+alpha)/3) of the similarity ansatz."""

    alpha: float

    def __post_init__(self) -> None:
        if not (ALPHA_MIN <= self.alpha < ALPHA_MAX):
            raise ParameterRangeError(
                f"alpha={self.alpha} outside admissible range "
                f"[{ALPHA_MIN}, {ALPHA_MAX})")

    @property
    def beta(self) -> float:
        return (1.0 + self.alpha) / 3.0

    @property
    def alpha_over_beta(self) -> float:
        return 3.0 * self.alpha / (1.0 + self.alpha)


@dataclass(frozen=True)
class ProfileState:
    y: float
    f: float
    fp: float
    fpp: float

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.f, self.fp, self.fpp])


@dataclass(frozen=True)
class OriginSeed:
    """Series step-off data: slope A < 0 and step-off distance delta > 0.

    The default delta keeps the quintic series term below 1e-6 of the
    leading linear term at the step-off point.
    """

    A: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.A >= 0.0:
            raise ValueError("origin slope A must be negative")
        if self.delta == 0.0:
            object.__setattr__(
                self, "delta", 1e-3 * max(1.0, 1.0 / abs(self.A)))
        if self.delta <= 0.0:
            raise ValueError("delta must be positive")
        quintic = abs(self.delta ** 5 / (72.0 ** 2 * self.A))
        if quintic >= 1e-6 * abs(self.A * self.delta):
            raise ValueError("delta too large for the series truncation")


@dataclass(frozen=True)
class TailAsymptotics:
    """Far-field constants: f ~ C0*(-y)^(alpha/beta) plus a modulated
    oscillation (blow-up side) or exponential correction (extension side)."""

    C0: float
    gamma: float
    omega: float
    C1: float = 0.0
    C2: float = 0.0
    delta_exp: float = 0.0
    residual: float = 0.0


@dataclass(frozen=True)
class CharacteristicRoots:
    """Roots of (m-3)(m^2 + 9m - 20*alpha - 2) = 0 for perturbations
    y^m about the explicit cubic solution."""

    roots: tuple[float, float, float]

    @property
    def m_plus(self) -> float:
        return self.roots[1]

    @property
    def m_minus(self) -> float:
        return self.roots[2]


def blowup_rhs(params: SimilarityParams):
    """Normal-form right-hand side; singular exactly where f = 0."""
    alpha, beta = params.alpha, params.beta

    def rhs(y: float, s: np.ndarray) -> np.ndarray:
        f, fp, fpp = s
        if f == 0.0:
            raise RhsFailure("degenerate point f=0")
        f3 = (beta * y * fp - alpha * f - 3.0 * fp * fpp) / f
        return np.array([fp, fpp, f3])

    return rhs

def blowup_operator_residual(params: SimilarityParams, y: float, f: float,
                             fp: float, fpp: float, f3: float) -> float:
    """Residual of (f f')'' - beta*y*f' + alpha*f, expanded as
    f*f''' + 3 f' f'' - beta*y*f' + alpha*f."""
    return f * f3 + 3.0 * fp * fpp - params.beta * y * fp + params.alpha * f


def origin_series_state(params: SimilarityParams,
                        seed: OriginSeed) -> ProfileState:
    """Evaluate the truncated origin series and its derivatives at y=-delta."""
    A = seed.A
    y = -seed.delta
    c3 = (1.0 - 2.0 * params.alpha) / 72.0
    c5 = (1.0 - 2.0 * params.alpha) ** 2 / 72.0 ** 2 / A
    f = A * y + c3 * y ** 3 + c5 * y ** 5
    fp = A + 3.0 * c3 * y ** 2 + 5.0 * c5 * y ** 4
    fpp = 6.0 * c3 * y + 20.0 * c5 * y ** 3
    return ProfileState(y=y, f=f, fp=fp, fpp=fpp)


def profile_events(eps_ext: float, floor_value: float, theta: float = 0.5,
                   y_detect: float = 5.0, use_abs: bool = False
                   ) -> list[EventSpec]:
    """Extinction and cubic-growth detectors for a profile integration.

    Growth is declared when the state exceeds theta*(-y)^3/60 plus an
    additive margin floor_value; the margin keeps regular transient humps
    near the origin (where the bare cubic envelope is tiny) from
    triggering, while orbits genuinely growing onto the cubic cross any
    fixed margin.  The cubic part of the envelope is frozen at its
    y = -y_detect value closer to the origin.
    """

    def ext_test(y: float, s: np.ndarray) -> float:
        return s[0] - eps_ext

    def growth_test(y: float, s: np.ndarray) -> float:
        env = theta * max(-y, y_detect) ** 3 / 60.0 + floor_value
        v = abs(s[0]) if use_abs else s[0]
        return v - env

    return [
        EventSpec(id=EXTINCTION_EVENT, test=ext_test, direction="falling"),
        EventSpec(id=GROWTH_EVENT, test=growth_test, direction="rising"),
    ]


def _check_run(traj: Trajectory, what: str) -> None:
    term = traj.termination
    if term.kind == TerminationKind.REACHED_END:
        return
    if term.kind == TerminationKind.EVENT:
        kind = ("extinction" if term.event_id == EXTINCTION_EVENT
                else "cubic growth")
        raise ProfileError(
            f"{what}: {kind} event at y={term.y:.6g}", traj)
    raise ProfileError(f"{what}: {term.detail} at y={term.y:.6g}", traj)


def solve_blowup_profile(params: SimilarityParams, seed: OriginSeed,
                         y_end: float = DEFAULT_Y_END,
                         rtol: float = DEFAULT_RTOL,
                         atol: float = DEFAULT_ATOL
                         ) -> tuple[Trajectory, TailAsymptotics]:
    """Integrate the blow-up profile from the origin series to y_end and
    fit the far-field tail on the last half of the span."""
    if y_end > -10.0:
        raise ValueError("y_end must be <= -10")
    start = origin_series_state(params, seed)
    floor = 50.0 * max(1.0, abs(seed.A)) ** 1.5
    events = profile_events(eps_ext=1e-9, floor_value=floor, use_abs=True)
    problem = OdeProblem(3, blowup_rhs(params), (start.y, y_end))
    traj = integrate(problem, start.vector, rtol, atol, events)
    _check_run(traj, f"blow-up profile alpha={params.alpha} A={seed.A}")
    ys = np.linspace(start.y, y_end, 2000)
    if np.min(traj(ys)[:, 0]) <= 0.0:
        raise ProfileError("profile not strictly positive on the interior",
                           traj)
    tail = estimate_tail_C0(traj, params, (y_end, y_end / 2.0))
    return traj, tail


def solve_collapse_profile(params: SimilarityParams, f0: float, f1: float,
                           f2: float, y_end: float = DEFAULT_Y_END,
                           rtol: float = DEFAULT_RTOL,
                           atol: float = DEFAULT_ATOL
                           ) -> tuple[Trajectory, TailAsymptotics]:
    """Integrate from regular Cauchy data f(0)=f0>0, f'(0)=f1, f''(0)=f2.

    The induced shock jump 2*f0*(-t)^alpha collapses as t -> 0^-.
    """
    if f0 <= 0.0:
        raise ValueError("f0 must be positive")
    scale = max(abs(f0), abs(f1), 1.0)
    floor = 50.0 * scale ** 1.5
    events = profile_events(eps_ext=1e-9 * max(1.0, f0), floor_value=floor,
                            use_abs=True)
    problem = OdeProblem(3, blowup_rhs(params), (0.0, y_end))
    traj = integrate(problem, np.array([f0, f1, f2]), rtol, atol, events)
    _check_run(traj, f"collapse profile alpha={params.alpha} f0={f0}")
    tail = estimate_tail_C0(traj, params, (y_end, y_end / 2.0))
    return traj, tail


def jump_at_time(f0: float, params: SimilarityParams, t: float) -> float:
    """Shock jump 2*f0*(-t)^alpha of the collapsing similarity solution,
    t < 0."""
    if t >= 0.0:
        raise ValueError("collapse jump is defined for t < 0")
    return 2.0 * f0 * (-t) ** params.alpha


class ScaledTrajectory:
    """View of a trajectory under the scaling f_a(y) = a^3 f(y/a).

    Derivatives transform as f' -> a^2 f'(y/a), f'' -> a f''(y/a); the
    tail amplitude as C0 -> a^(3-alpha/beta)*C0 and the origin slope as
    A -> a^2*A.
    """

    def __init__(self, base: Trajectory, a: float):
        self._base = base
        self._a = a
        self._scale = np.array([a ** 3, a ** 2, a])
        self.ys = a * base.ys
        self.states = base.states * self._scale
        self.termination = base.termination

    @property
    def span(self) -> tuple[float, float]:
        return float(self.ys[0]), float(self.ys[-1])

    def __call__(self, y):
        return self._base(np.asarray(y, dtype=float) / self._a) * self._scale


def rescale_profile(traj: Trajectory, params: SimilarityParams,
                    a: float) -> ScaledTrajectory:
    if a == 0.0:
        raise ValueError("scaling parameter must be nonzero")
    return ScaledTrajectory(traj, a)


def estimate_tail_C0(traj, params: SimilarityParams,
                     window: tuple[float, float],
                     n_samples: int = 512) -> TailAsymptotics:
    """Fit the far-field law on a window of the trajectory.

    C0 is a median (robust against the undamped-looking oscillation whose
    envelope exponent is unknown); the oscillation amplitudes C1, C2 and
    the envelope exponent are then fit by least squares over a small grid
    of candidate exponents.
    """
    y_lo, y_hi = min(window), max(window)
    if y_hi > -10.0:
        raise TailFitError("fit window must satisfy y_hi <= -10")
    span_lo = min(traj.span)
    span_hi = max(traj.span)
    y_lo = max(y_lo, span_lo)
    y_hi = min(y_hi, span_hi)
    if y_hi <= y_lo:
        raise TailFitError("fit window outside trajectory span")
    n = max(n_samples, 200)
    ys = np.linspace(y_lo, y_hi, n)
    if len(ys) < 50:
        raise TailFitError("fewer than 50 samples in fit window")
    f = traj(ys)[:, 0]
    my = -ys
    pw = my ** params.alpha_over_beta
    c0 = float(np.median(f / pw))
    if c0 <= 0.0:
        raise TailFitError("non-positive C0 estimate")
    gamma, omega = wkbj_params(params, c0)
    resid = f - c0 * pw
    phase = omega * my ** gamma
    best = None
    for delta in np.linspace(-2.0, 0.0, 41):
        env = my ** delta
        basis = np.column_stack([env * np.sin(phase), env * np.cos(phase)])
        coef, rss, *_ = np.linalg.lstsq(basis, resid, rcond=None)
        rms = math.sqrt(float(np.mean((resid - basis @ coef) ** 2)))
        if best is None or rms < best[0]:
            best = (rms, delta, float(coef[0]), float(coef[1]))
    rms, delta, c1, c2 = best
    return TailAsymptotics(C0=c0, gamma=gamma, omega=omega, C1=c1, C2=c2,
                           delta_exp=delta, residual=rms)


def characteristic_roots(params: SimilarityParams) -> CharacteristicRoots:
    disc = math.sqrt(89.0 + 80.0 * params.alpha)
    return CharacteristicRoots(
        roots=(3.0, (-9.0 + disc) / 2.0, (-9.0 - disc) / 2.0))


def wkbj_params(params: SimilarityParams, C0: float) -> tuple[float, float]:
    """Phase exponent gamma = 1 + (1 - alpha/beta)/2 and oscillation rate
    omega = (1/gamma)*sqrt(beta/C0)."""
    if C0 <= 0.0:
        raise ValueError("C0 must be positive")
    gamma = 1.0 + 0.5 * (1.0 - params.alpha_over_beta)
    omega = math.sqrt(params.beta / C0) / gamma
    return gamma, omega


def final_time_profile(params: SimilarityParams, C0: float, x_grid,
                       rarefaction: bool = False) -> np.ndarray:
    """Final-time profile u(x, 0^-) = sign(-x)*C0*|x|^(alpha/beta); the
    rarefaction variant is the negation."""
    if C0 <= 0.0:
        raise ValueError("C0 must be positive")
    x = np.asarray(x_grid, dtype=float)
    u = np.sign(-x) * C0 * np.abs(x) ** params.alpha_over_beta
    return -u if rarefaction else u


def tail_phase_increments(traj, params: SimilarityParams,
                          tail: TailAsymptotics,
                          window: tuple[float, float],
                          n_samples: int = 40000) -> np.ndarray:
    """Phase increments omega*((-y_{k+1})^gamma - (-y_k)^gamma) between
    successive zeros of the tail perturbation on the window.

    Increments of pi confirm the oscillatory far-field phase law.
    """
    y_lo, y_hi = min(window), max(window)
    ys = np.linspace(y_lo, y_hi, n_samples)
    resid = traj(ys)[:, 0] - tail.C0 * (-ys) ** params.alpha_over_beta
    sign = np.sign(resid)
    flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    zeros = []
    for i in flips:
        a, b = ys[i], ys[i + 1]
        fa = resid[i]
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = (traj(mid)[0]
                  - tail.C0 * (-mid) ** params.alpha_over_beta)
            if (fm < 0.0) == (fa < 0.0):
                a, fa = mid, fm
            else:
                b = mid
        zeros.append(0.5 * (a + b))
    zeros = np.sort(np.asarray(zeros))  # ascending y, i.e. decreasing -y
    phases = tail.omega * (-zeros) ** tail.gamma
    return -np.diff(phases)
