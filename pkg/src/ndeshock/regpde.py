"""Method-of-lines solver for the rescaled regularized problem

    v_tau = (v*v_y)_yy - v_yyyy   on y in (-L, 0),

with anti-symmetry v = v_yy = 0 at y = 0 (odd ghost reflection) and
time-frozen clamped data v, v_y at y = -L.  The fourth-order capillarity
term makes explicit stepping dy^4-stiff; desk-scale grids keep the step
count manageable and avoid linear-solver machinery.  The rescaling map
u(x,t) = eps^(1/3) v(x/eps^(2/3), t/eps^(5/3)) turns snapshots into
physical-space sample tables for probing how the vanishing-regularization
limit depends on the chosen subsequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "EvolveResult",
    "build_grid",
    "sqrt_initial_field",
    "rhs_semidiscrete",
    "evolve",
    "rescale_to_physical",
    "limit_table",
]

MIN_POINTS = 64
BLOWUP_GUARD = 1e6


@dataclass(frozen=True)
class Grid:
    L: float
    n: int

    @property
    def dy(self) -> float:
        return self.L / self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.L, 0.0, self.n + 1)


def build_grid(L: float, n: int) -> Grid:
    if L <= 0.0:
        raise ValueError("L must be positive")
    if n < MIN_POINTS:
        raise ValueError(f"n must be >= {MIN_POINTS} (stencil width)")
    return Grid(L=L, n=n)


@dataclass
class Field:
    """Node values on the grid (including both boundary nodes) plus the
    frozen clamp data at y = -L.  v(0) = 0 is required exactly; the odd
    ghost construction then keeps v_yy(0) = 0."""

    values: np.ndarray
    tau: float = 0.0
    left_value: float = 0.0
    left_slope: float = 0.0

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values[-1] != 0.0:
            raise ValueError(
                "field violates the odd-extension condition v(0)=0")

    def l2_norm(self, grid: Grid) -> float:
        return math.sqrt(float(np.sum(self.values ** 2)) * grid.dy)


def sqrt_initial_field(grid: Grid) -> Field:
    """Blow-up data v0(y) = sqrt(|y|) with the matching left clamp."""
    v = np.sqrt(-grid.nodes)
    v[-1] = 0.0
    return Field(values=v, left_value=math.sqrt(grid.L),
                 left_slope=-0.5 / math.sqrt(grid.L))


def _ghosted(field: Field, grid: Grid) -> np.ndarray:
    n = grid.n
    vg = np.empty(n + 3)
    vg[1:n + 2] = field.values
    vg[1] = field.left_value
    # Left ghost from the clamped slope, right ghost from odd reflection.
    vg[0] = vg[2] - 2.0 * grid.dy * field.left_slope
    vg[n + 2] = -vg[n]
    return vg


def rhs_semidiscrete(field: Field, grid: Grid,
                     nonlinear: bool = True) -> np.ndarray:
    """Second-order centered semidiscretization of (v*v_y)_yy - v_yyyy.

    Returns the full node array with zero entries at both boundary nodes
    (clamped left value, pinned v(0)=0).
    """
    n, dy = grid.n, grid.dy
    vg = _ghosted(field, grid)
    v = vg[1:n + 2]
    out = np.zeros(n + 1)
    v4 = (vg[:n - 1] - 4.0 * vg[1:n] + 6.0 * vg[2:n + 1]
          - 4.0 * vg[3:n + 2] + vg[4:n + 3]) / dy ** 4
    out[1:n] = -v4
    if nonlinear:
        vy = (vg[2:] - vg[:-2]) / (2.0 * dy)
        w = v * vy
        w[-1] = 0.0  # v(0) = 0
        out[1:n] += (w[:-2] - 2.0 * w[1:-1] + w[2:]) / dy ** 2
    return out


@dataclass
class EvolveResult:
    snapshots: list[Field]
    status: str                 # "completed" | "unstable"
    steps: int
    detail: str = ""
    l2_history: np.ndarray | None = None


def evolve(field0: Field, grid: Grid, tau_end: float, cfl: float = 0.25,
           snapshot_times=None, nonlinear: bool = True,
           track_l2: bool = False) -> EvolveResult:
    """Classical four-stage explicit stepping with
    dt = cfl*dy^4/(1 + max|v|); aborts cleanly on NaN or the blow-up guard.
    """
    if tau_end <= 0.0:
        raise ValueError("tau_end must be positive")
    if not 0.0 < cfl <= 0.5:
        raise ValueError("cfl must lie in (0, 0.5]")
    targets = sorted({t for t in list(snapshot_times or []) + [tau_end]
                      if 0.0 < t <= tau_end})

    v = field0.values.copy()
    tau = field0.tau
    lv, ls = field0.left_value, field0.left_slope
    dy4 = grid.dy ** 4
    snapshots: list[Field] = []
    norms: list[float] = [] if track_l2 else None
    steps = 0

    def rhs(vals: np.ndarray) -> np.ndarray:
        return rhs_semidiscrete(
            Field(values=vals, tau=tau, left_value=lv, left_slope=ls),
            grid, nonlinear=nonlinear)

    ti = 0
    while ti < len(targets):
        target = targets[ti]
        while tau < target - 1e-15 * max(1.0, target):
            vmax = float(np.max(np.abs(v)))
            if not math.isfinite(vmax) or vmax > BLOWUP_GUARD:
                return EvolveResult(
                    snapshots=snapshots, status="unstable", steps=steps,
                    detail=f"guard tripped at tau={tau:.6g} (max|v|={vmax:.3g})",
                    l2_history=np.array(norms) if track_l2 else None)
            dt = min(cfl * dy4 / (1.0 + vmax), target - tau)
            k1 = rhs(v)
            k2 = rhs(v + 0.5 * dt * k1)
            k3 = rhs(v + 0.5 * dt * k2)
            k4 = rhs(v + dt * k3)
            v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            v[0] = lv
            v[-1] = 0.0
            tau += dt
            steps += 1
            if track_l2:
                norms.append(
                    math.sqrt(float(np.sum(v ** 2)) * grid.dy))
        snapshots.append(Field(values=v.copy(), tau=tau,
                               left_value=lv, left_slope=ls))
        ti += 1
    return EvolveResult(snapshots=snapshots, status="completed", steps=steps,
                        l2_history=np.array(norms) if track_l2 else None)


def rescale_to_physical(field: Field, grid: Grid, eps: float
                        ) -> tuple[np.ndarray, float, np.ndarray]:
    """Map rescaled samples (y, tau, v) to physical (x, t, u):
    x = eps^(2/3)*y, t = eps^(5/3)*tau, u = eps^(1/3)*v."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    x = eps ** (2.0 / 3.0) * grid.nodes
    t = eps ** (5.0 / 3.0) * field.tau
    u = eps ** (1.0 / 3.0) * field.values
    return x, t, u


def limit_table(snapshots: list[Field], grid: Grid, eps_list, t: float,
                y_star: float = -1.0) -> list[dict]:
    """Sample u_eps(x_eps, t) with x_eps = eps^(2/3)*y_star for a sequence
    of regularization strengths.

    Each eps asks for the snapshot nearest tau = t/eps^(5/3); the emitted
    rows make the subsequence dependence of the vanishing-eps limit
    inspectable (the limit itself is not computed).
    """
    taus = np.array([s.tau for s in snapshots])
    rows = []
    for eps in eps_list:
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        tau_req = t / eps ** (5.0 / 3.0)
        i = int(np.argmin(np.abs(taus - tau_req)))
        snap = snapshots[i]
        v_star = float(np.interp(y_star, grid.nodes, snap.values))
        rows.append({
            "eps": float(eps),
            "x": eps ** (2.0 / 3.0) * y_star,
            "tau_requested": tau_req,
            "tau_used": snap.tau,
            "u": eps ** (1.0 / 3.0) * v_star,
        })
    return rows
