"""Adaptive embedded Runge-Kutta integration with dense output and events.

Explicit Dormand-Prince 5(4) pair with PI step-size control.  A quartic
dense interpolant backs both event bisection and trajectory sampling.
Step-size underflow below 1e-14*max(1,|y|) is reported as a StepFailure
termination rather than raised: the degenerate problems served here
genuinely collapse the step near singular points, and the caller wants
the partial trajectory back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "RhsFailure",
    "OutOfSpanError",
    "TerminationKind",
    "Termination",
    "OdeProblem",
    "EventSpec",
    "EventHit",
    "Trajectory",
    "integrate",
    "dense_eval",
]

STEP_FLOOR = 1e-14
INITIAL_STEP_FRACTION = 1e-4
MAX_STEPS = 5_000_000


class RhsFailure(Exception):
    """Right-hand side cannot be evaluated at the requested point."""


class OutOfSpanError(ValueError):
    """Dense-output query outside the trajectory span."""


class TerminationKind(Enum):
    REACHED_END = "reached_end"
    EVENT = "event"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    y: float
    event_id: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class OdeProblem:
    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]
    span: tuple[float, float]

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if self.span[0] == self.span[1]:
            raise ValueError("span must have nonzero length")


@dataclass(frozen=True)
class EventSpec:
    """Scalar event test evaluated along the trajectory.

    direction: "any", "rising" (test goes negative -> nonnegative) or
    "falling".  Terminal events truncate the integration at the located
    crossing.
    """

    id: int
    test: Callable[[float, np.ndarray], float]
    direction: str = "any"
    terminal: bool = True

    def __post_init__(self) -> None:
        if self.direction not in ("any", "rising", "falling"):
            raise ValueError(f"bad event direction {self.direction!r}")


@dataclass(frozen=True)
class EventHit:
    event_id: int
    y: float
    state: np.ndarray


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.zeros((7, 7))
_A[1, 0] = 1 / 5
_A[2, :2] = (3 / 40, 9 / 40)
_A[3, :3] = (44 / 45, -56 / 15, 32 / 9)
_A[4, :4] = (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729)
_A[5, :5] = (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_A[6, :6] = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
# Error weights: difference of the order-5 and embedded order-4 solutions.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920,
               -17253 / 339200, 22 / 525, -1 / 40])
# Dense-output weights for the quartic interpolant.
_D = np.array([-12715105075 / 11282082432, 0.0, 87487479700 / 32700410799,
               -10690763975 / 1880347072, 701980252875 / 199316789632,
               -1453857185 / 822651844, 69997945 / 29380423])


def _interp(rcont: np.ndarray, theta: float) -> np.ndarray:
    s1 = 1.0 - theta
    return rcont[0] + theta * (
        rcont[1] + s1 * (rcont[2] + theta * (rcont[3] + s1 * rcont[4])))


class Trajectory:
    """Adaptively sampled solution curve with per-step dense output."""

    def __init__(self, ys, states, step_y0, step_h, rconts, termination,
                 events: Sequence[EventHit] = ()):
        self.ys = np.asarray(ys, dtype=float)
        self.states = np.asarray(states, dtype=float)
        self._step_y0 = np.asarray(step_y0, dtype=float)
        self._step_h = np.asarray(step_h, dtype=float)
        self._rconts = rconts  # list of (5, dim) arrays
        self.termination = termination
        self.events = list(events)
        self._dir = 1.0 if self.ys[-1] >= self.ys[0] else -1.0

    @property
    def span(self) -> tuple[float, float]:
        return float(self.ys[0]), float(self.ys[-1])

    @property
    def n_steps(self) -> int:
        return len(self._rconts)

    def __call__(self, y):
        y_arr = np.atleast_1d(np.asarray(y, dtype=float))
        slack = 1e-12 * max(1.0, abs(self.ys[0]), abs(self.ys[-1]))
        lo = min(self.ys[0], self.ys[-1]) - slack
        hi = max(self.ys[0], self.ys[-1]) + slack
        if np.any(y_arr < lo) or np.any(y_arr > hi):
            raise OutOfSpanError(
                f"query outside span [{self.ys[0]}, {self.ys[-1]}]")
        if self.n_steps == 0:
            out = np.tile(self.states[0], (len(y_arr), 1))
            return out[0] if np.isscalar(y) or np.ndim(y) == 0 else out
        keys = self._dir * self.ys
        idx = np.searchsorted(keys, self._dir * y_arr, side="right") - 1
        idx = np.clip(idx, 0, self.n_steps - 1)
        out = np.empty((len(y_arr), self.states.shape[1]))
        for j, (yq, i) in enumerate(zip(y_arr, idx)):
            theta = (yq - self._step_y0[i]) / self._step_h[i]
            out[j] = _interp(self._rconts[i], theta)
        if np.isscalar(y) or np.ndim(y) == 0:
            return out[0]
        return out


def dense_eval(traj: Trajectory, y: float) -> np.ndarray:
    """Continuous interpolant of the trajectory at ``y`` (range-checked)."""
    return traj(y)


def _crossed(g0: float, g1: float, direction: str) -> bool:
    if direction == "rising":
        return g0 < 0.0 <= g1
    if direction == "falling":
        return g0 > 0.0 >= g1
    return (g0 < 0.0 <= g1) or (g0 > 0.0 >= g1)


def _locate_event(ev: EventSpec, y0: float, y1: float, g0: float,
                  rcont: np.ndarray, h_full: float, y_start: float,
                  rtol: float) -> float:
    """Bisect the dense output for the event crossing inside one step."""
    a, b = y0, y1
    ga = g0
    tol = rtol * max(1.0, abs(y1))
    for _ in range(200):
        if abs(b - a) <= tol:
            break
        mid = 0.5 * (a + b)
        state = _interp(rcont, (mid - y_start) / h_full)
        gm = ev.test(mid, state)
        if (gm < 0.0) == (ga < 0.0):
            a, ga = mid, gm
        else:
            b = mid
    return b


def integrate(problem: OdeProblem, initial, rtol: float, atol: float,
              events: Sequence[EventSpec] = ()) -> Trajectory:
    """Integrate over ``problem.span`` with local error control.

    The local error per step is controlled against rtol*|state| + atol by
    the embedded 4th-order estimate.  Event locations are bisected on the
    dense output to within rtol*max(1,|y|).
    """
    if rtol <= 0.0 or atol <= 0.0:
        raise ValueError("rtol and atol must be positive")
    y = np.array(initial, dtype=float)
    if y.shape != (problem.dimension,):
        raise ValueError(
            f"initial state has shape {y.shape}, expected ({problem.dimension},)")
    t0, t1 = problem.span
    direction = 1.0 if t1 > t0 else -1.0
    t = t0
    h = INITIAL_STEP_FRACTION * (t1 - t0)

    def call_rhs(tq, yq):
        try:
            f = np.asarray(problem.rhs(tq, yq), dtype=float)
        except (RhsFailure, ZeroDivisionError, FloatingPointError) as exc:
            return None, f"{type(exc).__name__}: {exc}"
        if f.shape != yq.shape or not np.all(np.isfinite(f)):
            return None, "non-finite rhs value"
        return f, ""

    nodes_y = [t]
    nodes_s = [y.copy()]
    step_y0: list[float] = []
    step_h: list[float] = []
    rconts: list[np.ndarray] = []
    hits: list[EventHit] = []

    k1, msg = call_rhs(t, y)
    if k1 is None:
        term = Termination(TerminationKind.STEP_FAILURE, t, detail=msg)
        return Trajectory(nodes_y, nodes_s, step_y0, step_h, rconts, term)

    g_prev = [ev.test(t, y) for ev in events]
    facold = 1e-4
    just_rejected = False
    termination = None
    ks = np.empty((7, problem.dimension))
    n_steps = 0

    while True:
        if (t - t1) * direction >= 0.0:
            termination = Termination(TerminationKind.REACHED_END, t)
            break
        if (t + h - t1) * direction > 0.0:
            h = t1 - t
        if abs(h) < STEP_FLOOR * max(1.0, abs(t)):
            termination = Termination(
                TerminationKind.STEP_FAILURE, t,
                detail=f"step size underflow at y={t!r}")
            break
        n_steps += 1
        if n_steps > MAX_STEPS:
            termination = Termination(
                TerminationKind.STEP_FAILURE, t, detail="step budget exceeded")
            break

        ks[0] = k1
        failed = False
        ynew = y
        for i in range(1, 7):
            yi = y + h * (_A[i, :i] @ ks[:i])
            ki, msg = call_rhs(t + _C[i] * h, yi)
            if ki is None:
                failed = True
                break
            ks[i] = ki
            if i == 6:
                ynew = yi  # stage 7 abscissa equals the order-5 solution (FSAL)
        if not failed:
            err_vec = h * (_E @ ks)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
            err = math.sqrt(float(np.mean((err_vec / sc) ** 2)))
            if not math.isfinite(err):
                failed = True

        if failed:
            h *= 0.5
            just_rejected = True
            continue
        if err > 1.0:
            h *= max(0.2, 0.9 * err ** -0.2)
            just_rejected = True
            continue

        # Accepted step: dense coefficients, then events.
        tnew = t + h
        ydiff = ynew - y
        bspl = h * ks[0] - ydiff
        rcont = np.stack([y, ydiff, bspl, ydiff - h * ks[6] - bspl,
                          h * (_D @ ks)])

        trigger = None  # (index into events, location)
        for idx, ev in enumerate(events):
            g1 = ev.test(tnew, ynew)
            if _crossed(g_prev[idx], g1, ev.direction):
                loc = _locate_event(ev, t, tnew, g_prev[idx], rcont, h, t, rtol)
                if trigger is None or (loc - trigger[1]) * direction < 0.0:
                    trigger = (idx, loc)
            g_prev[idx] = g1

        if trigger is not None:
            idx, loc = trigger
            ev = events[idx]
            state = _interp(rcont, (loc - t) / h)
            hits.append(EventHit(ev.id, loc, state))
            if ev.terminal:
                nodes_y.append(loc)
                nodes_s.append(state)
                step_y0.append(t)
                step_h.append(h)
                rconts.append(rcont)
                termination = Termination(
                    TerminationKind.EVENT, loc, event_id=ev.id)
                break
            g_prev[idx] = ev.test(tnew, ynew)

        nodes_y.append(tnew)
        nodes_s.append(ynew.copy())
        step_y0.append(t)
        step_h.append(h)
        rconts.append(rcont)
        t = tnew
        y = ynew.copy()
        k1 = ks[6].copy()

        # PI controller (Hairer-style, beta = 0.04).
        expo1 = 0.2 - 0.04 * 0.75
        fac11 = err ** expo1 if err > 0.0 else 0.0
        fac = fac11 / facold ** 0.04
        facmax = 1.0 if just_rejected else 10.0
        fac = max(1.0 / facmax, min(1.0 / 0.2, fac / 0.9))
        h = h / fac
        facold = max(err, 1e-4)
        just_rejected = False

    return Trajectory(nodes_y, nodes_s, step_y0, step_h, rconts,
                      termination, hits)
