"""Post-blow-up extension profiles and the shooting machinery.

The continuation ansatz u = t^alpha F(x/t^beta) for t > 0 leads to

    (F F')'' + beta*y*F' - alpha*F = 0   on y < 0,

integrated leftward from Cauchy data (F0, F1, F2) at the origin.  Generic
data land in one of two open "bad" bundles: singular extinction (F -> 0 at
finite y, where the degenerate F*F''' term blows up) or fast growth onto
the explicit cubic -y^3/60.  The wanted orbits approach C0*(-y)^(alpha/beta)
and form the separatrix in between; a bisection on one Cauchy component
pins them down.  Sweeping the remaining free component produces the
one-parameter family of continuations sharing a single far-field constant,
and seeding with the zero-jump origin series shows that no such orbit
exists with F0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .blowup import (SimilarityParams, TailAsymptotics, TailFitError,
                     profile_events, wkbj_params, EXTINCTION_EVENT,
                     GROWTH_EVENT)
from .odeint import (OdeProblem, RhsFailure, TerminationKind, Trajectory,
                     integrate)

__all__ = [
    "CauchyTriple",
    "ShotKind",
    "ShotClassification",
    "ShootingResult",
    "FamilyMember",
    "Family",
    "ShootConfig",
    "ShootError",
    "extension_rhs",
    "extension_operator_residual",
    "run_extension",
    "classify_trajectory",
    "shoot",
    "family_sweep",
    "normalize_to_C0",
    "nonexistence_scan",
    "NonexistenceReport",
    "extension_tail_params",
    "fit_extension_tail",
]


class ShootError(RuntimeError):
    pass


@dataclass(frozen=True)
class CauchyTriple:
    """Shooting data at the origin: jump half-height F0 >= 0 (zero only in
    nonexistence scans), slope F1 < 0, curvature F2."""

    F0: float
    F1: float
    F2: float

    def __post_init__(self) -> None:
        if self.F0 < 0.0:
            raise ValueError("F0 must be nonnegative")
        if self.F1 >= 0.0:
            raise ValueError("F1 must be negative")

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.F0, self.F1, self.F2])


class ShotKind(Enum):
    EXTINCTION = "extinction"      # bundle I
    CUBIC_GROWTH = "cubic_growth"  # bundle II
    MATCHED = "matched"


@dataclass(frozen=True)
class ShotClassification:
    kind: ShotKind
    trigger_y: float | None = None
    diagnostic: float | None = None


@dataclass(frozen=True)
class ShootConfig:
    y_end: float = -200.0
    rtol: float = 1e-10
    atol: float = 1e-10
    theta: float = 0.5
    y_detect: float = 5.0
    growth_margin: float = 5.0
    # Depth (in units of the orbit's own length scale) the final midpoint
    # must survive to before its tail fit is accepted as matched.
    min_match_depth: float = 4.0
    # Tail-fit window as fractions of the departure depth.
    fit_fracs: tuple[float, float] = (0.85, 0.40)
    max_expand: int = 60
    max_bisect: int = 200


@dataclass(frozen=True)
class ShootingResult:
    params: SimilarityParams
    triple: CauchyTriple
    tuned: str                       # "F0" | "F1" | "F2"
    tuned_value: float
    bracket: tuple[float, float]
    bracket_kinds: tuple[ShotKind, ShotKind]
    classification: ShotClassification
    tail: TailAsymptotics
    iterations: int
    trajectory: Trajectory
    config: ShootConfig

    @property
    def bracket_width(self) -> float:
        return abs(self.bracket[1] - self.bracket[0])


@dataclass(frozen=True)
class FamilyMember:
    F0: float
    result: ShootingResult


@dataclass(frozen=True)
class Family:
    params: SimilarityParams
    members: list[FamilyMember]
    failures: list[tuple[float, str]] = field(default_factory=list)


def extension_rhs(params: SimilarityParams):
    """Normal-form right-hand side; singular exactly where F = 0."""
    alpha, beta = params.alpha, params.beta

    def rhs(y: float, s: np.ndarray) -> np.ndarray:
        F, Fp, Fpp = s
        if F == 0.0:
            raise RhsFailure("degenerate point F=0")
        F3 = (alpha * F - beta * y * Fp - 3.0 * Fp * Fpp) / F
        return np.array([Fp, Fpp, F3])

    return rhs


def extension_operator_residual(params: SimilarityParams, y: float, F: float,
                                Fp: float, Fpp: float, F3: float) -> float:
    """Residual of (F F')'' + beta*y*F' - alpha*F."""
    return F * F3 + 3.0 * Fp * Fpp + params.beta * y * Fp - params.alpha * F


def _events_for(state0: np.ndarray, config: ShootConfig):
    # Only the extinction trigger terminates integration.  Growth cannot be
    # evented robustly: extinction-side orbits overshoot any pointwise
    # envelope on their transient hump before dipping, so growth is decided
    # from the endpoint instead (growth orbits are cheap to integrate).
    eps_ext = 1e-9 * max(1.0, state0[0])
    return profile_events(eps_ext=eps_ext, floor_value=0.0,
                          theta=config.theta,
                          y_detect=config.y_detect)[:1]


def run_extension(params: SimilarityParams, state0: np.ndarray,
                  config: ShootConfig, y_start: float = 0.0) -> Trajectory:
    problem = OdeProblem(3, extension_rhs(params), (y_start, config.y_end))
    return integrate(problem, state0, config.rtol, config.atol,
                     _events_for(state0, config))


def classify_trajectory(traj: Trajectory, params: SimilarityParams,
                        config: ShootConfig) -> ShotClassification:
    """Bundle membership of an extension integration started at the origin.

    Extinction is evented at F = eps; growth is read off the endpoint:
    an orbit that makes it to y_end above theta*(-y_end)^3/60 has joined
    the cubic bundle (the matched power law sits orders of magnitude
    below that envelope at depth).
    """
    term = traj.termination
    if term.kind == TerminationKind.EVENT:
        kind = (ShotKind.EXTINCTION if term.event_id == EXTINCTION_EVENT
                else ShotKind.CUBIC_GROWTH)
        return ShotClassification(kind, term.y,
                                  diagnostic=float(traj.states[-1, 0]))
    if term.kind == TerminationKind.STEP_FAILURE:
        final = float(traj.states[-1, 0])
        if abs(final) < 1e-3 * max(1.0, abs(traj.states[0, 0])):
            return ShotClassification(ShotKind.EXTINCTION, term.y,
                                      diagnostic=final)
        raise ShootError(
            f"ambiguous step failure at y={term.y:.6g} (F={final:.6g})")
    f_end = float(traj.states[-1, 0])
    env = config.theta * (-config.y_end) ** 3 / 60.0
    if f_end >= env:
        return ShotClassification(ShotKind.CUBIC_GROWTH, float(traj.ys[-1]),
                                  diagnostic=f_end / ((-config.y_end) ** 3
                                                      / 60.0))
    return ShotClassification(ShotKind.MATCHED, None, None)


_COMPONENTS = ("F0", "F1", "F2")


def _make_triple(fixed: dict[str, float], tuned: str,
                 value: float) -> CauchyTriple:
    vals = dict(fixed)
    vals[tuned] = value
    return CauchyTriple(vals["F0"], vals["F1"], vals["F2"])


def _classify_value(params, fixed, tuned, value, config):
    triple = _make_triple(fixed, tuned, value)
    traj = run_extension(params, triple.vector, config)
    return classify_trajectory(traj, params, config), traj


def fit_extension_tail(traj: Trajectory, params: SimilarityParams,
                       window: tuple[float, float],
                       n_samples: int = 600) -> TailAsymptotics:
    """Far-field constant of a near-separatrix extension orbit.

    Linear least squares against the known asymptotic structure: power law,
    the first two algebraic corrections it forces, and the decaying and
    growing WKBJ exponentials (the growing column absorbs the residual
    separatrix miss of a finitely tuned shot).  The exponential rate
    depends on C0, so the fit is iterated.
    """
    y_lo, y_hi = min(window), max(window)
    span_lo, span_hi = min(traj.span), max(traj.span)
    y_lo = max(y_lo, span_lo)
    y_hi = min(y_hi, span_hi)
    if y_hi - 1e-12 <= y_lo:
        raise TailFitError("fit window outside trajectory span")
    ys = np.linspace(y_lo, y_hi, n_samples)
    f = traj(ys)[:, 0]
    my = -ys
    p = params.alpha_over_beta
    pw = my ** p
    c0 = float(np.median(f / pw))
    if c0 <= 0.0:
        raise TailFitError("non-positive C0 estimate")
    gamma = 1.0 + 0.5 * (1.0 - p)
    c2 = 0.0
    rms = math.inf
    for _ in range(3):
        a_minus = -math.sqrt(params.beta / c0) / gamma
        cols = [pw, my ** (2.0 * p - 3.0), my ** (3.0 * p - 6.0),
                np.exp(a_minus * my ** gamma),
                np.exp(np.minimum(-a_minus * my ** gamma, 500.0))]
        basis = np.column_stack(cols)
        norms = np.linalg.norm(basis, axis=0)
        coef, *_ = np.linalg.lstsq(basis / norms, f, rcond=None)
        coef = coef / norms
        rms = math.sqrt(float(np.mean((f - basis @ coef) ** 2)))
        c0_new = float(coef[0])
        if c0_new <= 0.0:
            raise TailFitError("tail fit drifted to non-positive C0")
        converged = abs(c0_new - c0) <= 1e-12 * c0
        c0 = c0_new
        c2 = float(coef[3])
        if converged:
            break
    omega = math.sqrt(params.beta / c0) / gamma
    return TailAsymptotics(C0=c0, gamma=gamma, omega=omega, C1=0.0, C2=c2,
                           delta_exp=0.0, residual=rms)


def _departure_depth(traj: Trajectory, params: SimilarityParams) -> float:
    """Deepest y at which the orbit still tracks the far-field power law.

    The ratio F/(-y)^(alpha/beta) plateaus along the shadowed stretch of a
    near-separatrix orbit and leaves the plateau (up toward the cubic or
    down toward extinction) when the unstable mode takes over.
    """
    y_deep = min(traj.span)
    y_near = -min(2.0, 0.1 * (-y_deep))
    ys = -np.geomspace(-y_near, -y_deep, 1200)
    ratio = traj(ys)[:, 0] / (-ys) ** params.alpha_over_beta
    # Reference level from the near (always-shadowed) third of the grid;
    # a global median would land on the cubic branch when the orbit spends
    # most of its span there after departing.
    c_ref = float(np.median(ratio[: len(ratio) // 3]))
    if c_ref <= 0.0:
        return y_near
    off = np.abs(np.log(np.maximum(ratio, 1e-300) / c_ref)) > np.log(1.5)
    idx = np.nonzero(off)[0]
    if len(idx) == 0:
        return y_deep
    return float(ys[max(idx[0] - 1, 0)])


def _matched_result(params, fixed, tuned, lo, hi, kinds, iters, config):
    """Run the final midpoint and dress it up as the matched approximation."""
    mid = 0.5 * (lo + hi)
    triple = _make_triple(fixed, tuned, mid)
    traj = run_extension(params, triple.vector, config)
    y_dep = _departure_depth(traj, params)
    length_scale = max(abs(triple.F0) ** (1.0 / 3.0),
                       abs(triple.F1) ** 0.5, abs(triple.F2), 1e-3)
    if -y_dep < config.min_match_depth * length_scale:
        raise ShootError(
            f"separatrix approximation leaves the bundle too early "
            f"(departure y={y_dep:.4g}); bracket [{lo!r}, {hi!r}]")
    window = (config.fit_fracs[0] * y_dep, config.fit_fracs[1] * y_dep)
    tail = fit_extension_tail(traj, params, window)
    classification = ShotClassification(ShotKind.MATCHED, None, None)
    return ShootingResult(params=params, triple=triple, tuned=tuned,
                          tuned_value=mid, bracket=(lo, hi),
                          bracket_kinds=kinds, classification=classification,
                          tail=tail, iterations=iters, trajectory=traj,
                          config=config)


def shoot(params: SimilarityParams, fixed: dict[str, float], tuned: str,
          bracket: tuple[float, float], tol: float = 1e-12,
          config: ShootConfig = ShootConfig()) -> ShootingResult:
    """Bisect the tuned Cauchy component between the two bad bundles.

    The bracket auto-expands geometrically (up to config.max_expand
    doublings) if the initial endpoints classify identically.  At return
    the endpoints classify as extinction and cubic growth in some order,
    the bracket is narrower than tol, and the midpoint orbit carries the
    far-field fit.
    """
    if tuned not in _COMPONENTS:
        raise ValueError(f"tuned must be one of {_COMPONENTS}")
    if set(fixed) != set(_COMPONENTS) - {tuned}:
        raise ValueError("fixed must supply exactly the other two components")
    if "F0" in fixed and fixed["F0"] <= 0.0:
        raise ValueError("F0 must be positive for shooting")
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    lo, hi = float(bracket[0]), float(bracket[1])
    if lo > hi:
        lo, hi = hi, lo

    def clamp(v: float) -> float:
        # Keep tuned F1 strictly negative (and F0 strictly positive).
        if tuned == "F1":
            return min(v, -1e-12)
        if tuned == "F0":
            return max(v, 1e-12)
        return v

    lo, hi = clamp(lo), clamp(hi)
    kind_lo, _ = _classify_value(params, fixed, tuned, lo, config)
    kind_hi, _ = _classify_value(params, fixed, tuned, hi, config)
    width = hi - lo
    expansions = 0
    while kind_lo.kind == kind_hi.kind:
        if expansions >= config.max_expand:
            raise ShootError(
                f"no bracket: both endpoints classify as {kind_lo.kind.value} "
                f"after {expansions} expansions ([{lo!r}, {hi!r}])")
        expansions += 1
        width *= 2.0
        new_lo = clamp(lo - width)
        new_hi = clamp(hi + width)
        if new_lo != lo:
            lo = new_lo
            kind_lo, _ = _classify_value(params, fixed, tuned, lo, config)
        if kind_lo.kind != kind_hi.kind:
            break
        if new_hi != hi:
            hi = new_hi
            kind_hi, _ = _classify_value(params, fixed, tuned, hi, config)

    iters = 0
    while hi - lo > tol and iters < config.max_bisect:
        iters += 1
        mid = 0.5 * (lo + hi)
        kind_mid, _ = _classify_value(params, fixed, tuned, mid, config)
        if kind_mid.kind == ShotKind.MATCHED:
            # Midpoint genuinely reached y_end: accept it outright.
            lo = hi = mid
            break
        if kind_mid.kind == kind_lo.kind:
            lo, kind_lo = mid, kind_mid
        else:
            hi, kind_hi = mid, kind_mid

    return _matched_result(params, fixed, tuned, lo, hi,
                           (kind_lo.kind, kind_hi.kind), iters, config)


def _default_f2_bracket(F0: float) -> tuple[float, float]:
    s = max(1.0, F0)
    return (-2.0 * s, 2.0 * s)


def family_sweep(params: SimilarityParams, F0_list, tol: float = 1e-12,
                 config: ShootConfig = ShootConfig(),
                 f1_policy=None) -> Family:
    """One matched member per F0, shooting F2 with F1 given by the policy
    (default F1 = -F0)."""
    if f1_policy is None:
        f1_policy = lambda F0: -F0
    members: list[FamilyMember] = []
    failures: list[tuple[float, str]] = []
    for F0 in F0_list:
        if F0 <= 0.0:
            raise ValueError("family F0 values must be positive")
        try:
            res = shoot(params, {"F0": F0, "F1": f1_policy(F0)}, "F2",
                        _default_f2_bracket(F0), tol, config)
            members.append(FamilyMember(F0=F0, result=res))
        except (ShootError, TailFitError) as exc:
            failures.append((F0, str(exc)))
    return Family(params=params, members=members, failures=failures)


def normalize_to_C0(member: FamilyMember, target_C0: float,
                    tol: float = 1e-13,
                    reshoot: bool = True) -> FamilyMember:
    """Rescale a matched member so its far-field constant equals target_C0.

    The scaling f_a(y) = a^3 f(y/a) with a = (C0/target)^(-1/(3-alpha/beta))
    sends (F0, F1, F2) to (a^3 F0, a^2 F1, a F2).  With reshoot=True the
    rescaled triple is re-tuned (tiny bracket) and re-fitted, closing the
    loop on the quoted C0.
    """
    if target_C0 <= 0.0:
        raise ValueError("target_C0 must be positive")
    res = member.result
    params = res.params
    c0 = res.tail.C0
    a = (c0 / target_C0) ** (-1.0 / (3.0 - params.alpha_over_beta))
    t = res.triple
    scaled = CauchyTriple(a ** 3 * t.F0, a ** 2 * t.F1, a * t.F2)
    if not reshoot:
        new_tail = replace(res.tail, C0=target_C0)
        new_res = replace(res, triple=scaled,
                          tuned_value=getattr(scaled, res.tuned),
                          tail=new_tail)
        return FamilyMember(F0=scaled.F0, result=new_res)
    tuned_scaled = getattr(scaled, res.tuned)
    fixed = {c: getattr(scaled, c) for c in _COMPONENTS if c != res.tuned}
    pad = max(1e-9 * max(1.0, abs(tuned_scaled)), 10.0 * tol)
    new_res = shoot(params, fixed, res.tuned,
                    (tuned_scaled - pad, tuned_scaled + pad), tol, res.config)
    return FamilyMember(F0=scaled.F0, result=new_res)


@dataclass(frozen=True)
class NonexistenceReport:
    params: SimilarityParams
    entries: list[tuple[float, ShotClassification]]

    @property
    def matched_hits(self) -> list[float]:
        return [A for A, c in self.entries if c.kind == ShotKind.MATCHED]


def nonexistence_scan(params: SimilarityParams, A_list,
                      config: ShootConfig = ShootConfig()
                      ) -> NonexistenceReport:
    """Classify zero-jump (F0 = 0) orbits seeded from the origin series

        F = A*y - (1-2*alpha)/72*y^3 + ((1-2*alpha)/72)^2/A*y^5

    for each A < 0.  A matched outcome would contradict the nonexistence
    of smooth zero-jump continuations and is surfaced, never suppressed.
    """
    entries = []
    alpha = params.alpha
    c3 = (1.0 - 2.0 * alpha) / 72.0
    for A in A_list:
        if A >= 0.0:
            raise ValueError("scan slopes must be negative")
        delta = 1e-3 * max(1.0, 1.0 / abs(A))
        y = -delta
        c5 = c3 ** 2 / A
        F = A * y - c3 * y ** 3 + c5 * y ** 5
        Fp = A - 3.0 * c3 * y ** 2 + 5.0 * c5 * y ** 4
        Fpp = -6.0 * c3 * y + 20.0 * c5 * y ** 3
        state0 = np.array([F, Fp, Fpp])
        scale = max(abs(A), 1.0)
        events = profile_events(eps_ext=1e-12 * scale, floor_value=0.0,
                                theta=config.theta,
                                y_detect=config.y_detect)[:1]
        problem = OdeProblem(3, extension_rhs(params), (y, config.y_end))
        traj = integrate(problem, state0, config.rtol, config.atol, events)
        entries.append((A, classify_trajectory(traj, params, config)))
    return NonexistenceReport(params=params, entries=entries)


def extension_tail_params(params: SimilarityParams,
                          C0: float) -> tuple[float, float]:
    """(gamma, a_minus): the extension-side tail approaches the power law
    monotonically, with exponential rate a_minus = -(1/gamma)*sqrt(beta/C0)
    in the stretched variable (-y)^gamma."""
    gamma, omega = wkbj_params(params, C0)
    return gamma, -omega
