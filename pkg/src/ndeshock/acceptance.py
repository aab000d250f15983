"""Self-verification suite: one function per shipped guarantee.

Each criterion function returns a :class:`CriterionResult`; ``run_all``
executes them in order.  The same functions back both the ``verify`` CLI
subcommand and the packaged test suite, so a green test run and a green
``nde-shock verify`` are the same statement.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .blowup import (OriginSeed, SimilarityParams, blowup_operator_residual,
                     characteristic_roots, solve_blowup_profile,
                     tail_phase_increments, wkbj_params)
from .euler import (EulerParams, euler_F, euler_characteristics,
                    euler_rh_symmetry, shock_value)
from .extension import (ShootConfig, extension_operator_residual, family_sweep,
                        normalize_to_C0, nonexistence_scan, shoot)
from .regpde import (Field, build_grid, evolve, rhs_semidiscrete,
                     sqrt_initial_field)
from .shocks import ShockSide, fbp_kappa, rh_speed, select_fbp_profile

__all__ = ["CriterionResult", "run_all", "CRITERIA"]


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str
    elapsed: float


def _timed(fn):
    def wrapper() -> CriterionResult:
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failure
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        return CriterionResult(fn.__name__.removeprefix("criterion_"),
                               passed, detail, time.perf_counter() - t0)
    wrapper.__name__ = fn.__name__
    return wrapper


@_timed
def criterion_01_f2_slice_shot():
    """Tuned F1 on the curvature-10 slice at alpha=0.3 within 5e-3 in <10s.

    Reference curvatures are quoted for the mirrored (x > 0) branch of the
    odd global pattern; on the y < 0 branch integrated here the curvature
    carries the opposite sign, so the slice is F2 = -10.
    """
    t0 = time.perf_counter()
    params = SimilarityParams(0.3)
    res = shoot(params, {"F0": 1.0, "F2": -10.0}, "F1", (-8.0, -1e-6))
    elapsed = time.perf_counter() - t0
    err = abs(res.tuned_value - (-3.398))
    ok = err <= 5e-3 and elapsed < 10.0
    return ok, (f"F1*={res.tuned_value:.6f} (target -3.398, err {err:.2g}), "
                f"{elapsed:.1f}s")


@_timed
def criterion_02_anchor_constant():
    """High-precision anchor F1* for (0.1, F0=0.1, F2=0), stable under
    tolerance tightening."""
    t0 = time.perf_counter()
    params = SimilarityParams(0.1)
    target = -0.55548098
    res = shoot(params, {"F0": 0.1, "F2": 0.0}, "F1", (-2.0, -1e-6))
    loose = res.tuned_value
    cfg = ShootConfig(rtol=1e-11, atol=1e-11)
    res2 = shoot(params, {"F0": 0.1, "F2": 0.0}, "F1", (-2.0, -1e-6),
                 config=cfg)
    elapsed = time.perf_counter() - t0
    rel = abs(loose - target) / abs(target)
    drift = abs(res2.tuned_value - loose) / abs(target)
    ok = rel <= 1e-4 and drift <= 1e-6 and elapsed < 10.0
    return ok, (f"F1*={loose:.10f} (rel err {rel:.2g}), tightened drift "
                f"{drift:.2g}, {elapsed:.1f}s")


@_timed
def criterion_03_both_slices():
    """Either remaining component can be tuned on the same profile set.

    The tuned curvature is compared through the mirrored-branch sign
    convention (see criterion 1): the y < 0 branch value is -F2*.
    """
    params = SimilarityParams(0.1)
    r_f2 = shoot(params, {"F0": 1.0, "F1": -1.0}, "F2", (-4.0, 2.0))
    err2 = abs(-r_f2.tuned_value - 1.13285)
    r_f1 = shoot(params, {"F0": 1.0, "F2": 0.0}, "F1", (-2.0, -1e-6))
    err1 = abs(r_f1.tuned_value - (-0.257714))
    ok = err2 <= 1e-3 and err1 <= 1e-4
    return ok, (f"F2*={r_f2.tuned_value:.6f} (mirrored err {err2:.2g}), "
                f"F1*={r_f1.tuned_value:.7f} (err {err1:.2g})")


@_timed
def criterion_04_zero_jump_nonexistence():
    """No zero-jump smooth continuation along a 9-point slope grid."""
    t0 = time.perf_counter()
    grid = -np.geomspace(10.0, 0.1, 9)
    hits = {}
    for alpha in (0.1, 0.3):
        report = nonexistence_scan(SimilarityParams(alpha), grid)
        hits[alpha] = report.matched_hits
    elapsed = time.perf_counter() - t0
    total = sum(len(v) for v in hits.values())
    ok = total == 0 and elapsed < 60.0
    return ok, f"matched hits {hits}, {elapsed:.1f}s"


@_timed
def criterion_05_family_normalization():
    """Distinct-jump family members collapse onto one normalized orbit."""
    params = SimilarityParams(0.1)
    fam = family_sweep(params, [0.5, 1.0, 2.0])
    if fam.failures:
        return False, f"sweep failures: {fam.failures}"
    target = 1.0
    c0s, f0s, jumps = [], [], []
    for m in fam.members:
        norm = normalize_to_C0(m, target)
        c0s.append(norm.result.tail.C0)
        f0s.append(norm.result.triple.F0)
        jumps.append(2.0 * m.F0)
    spread = (max(c0s) - min(c0s)) / target
    distinct = len({round(j, 12) for j in jumps}) == len(jumps)
    ok = spread <= 1e-4 and distinct
    return ok, (f"normalized C0 spread {spread:.2g}, raw jumps {jumps}, "
                f"normalized F0 {['%.6g' % v for v in f0s]}")


@_timed
def criterion_06_cubic_solutions():
    """Exact cubic profiles satisfy both operators to 1e-11 |y|^3."""
    ys = np.linspace(-10.0, -1.0, 181)
    worst = 0.0
    for alpha in (0.0, 0.1, 0.25, 0.4):
        params = SimilarityParams(alpha)
        f = ys ** 3 / 60.0
        fp = ys ** 2 / 20.0
        fpp = ys / 10.0
        fppp = np.full_like(ys, 0.1)
        rb = blowup_operator_residual(params, ys, f, fp, fpp, fppp)
        re = extension_operator_residual(params, ys, -f, -fp, -fpp, -fppp)
        worst = max(worst, np.max(np.abs(rb) / np.abs(ys) ** 3),
                    np.max(np.abs(re) / np.abs(ys) ** 3))
    ok = worst <= 1e-11
    return ok, f"max scaled residual {worst:.2g}"


@_timed
def criterion_07_linearization_roots():
    """Root identities of the cubic-orbit linearization (20 random alpha)."""
    rng = np.random.default_rng(20260826)
    worst = 0.0
    for alpha in rng.uniform(-0.1, 0.5, 20):
        params = SimilarityParams(float(alpha))
        roots = characteristic_roots(params)
        m_plus, m_minus = roots.m_plus, roots.m_minus
        worst = max(worst,
                    abs(m_plus + m_minus + 9.0),
                    abs(m_plus * m_minus + (20.0 * alpha + 2.0)),
                    abs(roots.roots[0] - 3.0))
    ok = worst <= 1e-14
    return ok, f"max identity defect {worst:.2g}"


@_timed
def criterion_08_euler_reference():
    """Algebraic and characteristics routes agree; shock trace and jump
    symmetry hold exactly."""
    p = EulerParams(alpha=0.2, C0=1.3)
    gap = 0.0
    for t in (0.5, 1.0, 2.0):
        for y in np.linspace(-8.0, 0.0, 33):
            F = euler_F(y, p)
            u = euler_characteristics(y * t ** p.beta, t, p)
            gap = max(gap, abs(F - u / t ** p.alpha))
    shock_err = max(abs(shock_value(t, p) - p.C0 ** p.beta * t ** p.alpha)
                    for t in (0.5, 1.0, 2.0))
    F0m = euler_F(0.0, p)
    sym = euler_rh_symmetry(F0m)
    lam = rh_speed(ShockSide(F0m, -1.0, 0.0), ShockSide(sym, -1.0, 0.0)).lam
    ok = gap <= 1e-8 and shock_err <= 1e-12 and lam == 0.0
    return ok, (f"route gap {gap:.2g}, shock-law err {shock_err:.2g}, "
                f"lambda {lam}")


@_timed
def criterion_09_tail_oscillation():
    """Oscillatory blow-up tail: successive zero gaps carry phase pi."""
    params = SimilarityParams(0.2)
    traj, tail = solve_blowup_profile(params, OriginSeed(A=-1.0),
                                      y_end=-200.0)
    y_far = traj.span[1]
    increments = tail_phase_increments(traj, params, tail,
                                       window=(0.5 * y_far, y_far))
    last = increments[-10:]
    worst = np.max(np.abs(last - np.pi)) / np.pi
    ok = len(last) == 10 and worst <= 0.05
    return ok, (f"{len(increments)} gaps in window, worst relative phase "
                f"error {worst:.3g}")


@_timed
def criterion_10_regularized_problem():
    """Structural checks for the fourth-order regularized evolution."""
    t0 = time.perf_counter()
    notes = []
    ok = True

    grid = build_grid(4.0, 96)
    v0 = np.sin(np.pi * grid.nodes / grid.L) ** 3
    v0[-1] = 0.0
    field = Field(values=v0, tau=0.0, left_value=0.0, left_slope=0.0)

    # Odd symmetry about y=0: ghosting an odd field keeps the rhs odd-ish
    # at the boundary, i.e. rhs(0 node side) uses -v reflections only.
    r = rhs_semidiscrete(field, grid, nonlinear=True)
    sym_ok = r[-1] == 0.0 and r[0] == 0.0
    ok &= sym_ok
    notes.append(f"boundary rhs pinned: {sym_ok}")

    lin = evolve(field, grid, tau_end=2e-3, cfl=0.25, nonlinear=False,
                 track_l2=True)
    h = np.asarray(lin.l2_history)
    diss = lin.status == "completed" and np.all(np.diff(h) <= 1e-14)
    ok &= diss
    notes.append(f"linear L2 monotone over {len(h)} steps: {diss}")

    errs = []
    for n in (96, 192):
        g = build_grid(4.0, n)
        w0 = np.sin(np.pi * g.nodes / g.L) ** 3
        w0[-1] = 0.0
        res = evolve(Field(values=w0, tau=0.0, left_value=0.0,
                           left_slope=0.0), g, tau_end=1e-4, cfl=0.25,
                     nonlinear=True)
        gf = build_grid(4.0, 384)
        wf = np.sin(np.pi * gf.nodes / gf.L) ** 3
        wf[-1] = 0.0
        ref = evolve(Field(values=wf, tau=0.0, left_value=0.0,
                           left_slope=0.0), gf, tau_end=1e-4, cfl=0.25,
                     nonlinear=True)
        stride = gf.n // n if gf.n % n == 0 else None
        fine = ref.snapshots[-1].values[::stride]
        errs.append(np.max(np.abs(res.snapshots[-1].values - fine)))
    order = np.log2(errs[0] / errs[1])
    order_ok = abs(order - 2.0) <= 0.5
    ok &= order_ok
    notes.append(f"spatial order {order:.2f}")

    gs = build_grid(10.0, 512)
    run = evolve(sqrt_initial_field(gs), gs, tau_end=1e-2, cfl=0.25)
    stable = (run.status == "completed"
              and np.all(np.isfinite(run.snapshots[-1].values)))
    ok &= stable
    notes.append(f"sqrt run n=512: {run.status} after {run.steps} steps")

    elapsed = time.perf_counter() - t0
    ok = bool(ok) and elapsed < 300.0
    return ok, "; ".join(notes) + f"; {elapsed:.0f}s"


@_timed
def criterion_11_free_boundary_selection():
    """kappa=0 free-boundary pick reproduces the F2=0 anchor; distinct
    kappa values pick distinct family members."""
    params = SimilarityParams(0.1)
    sel0 = select_fbp_profile(params, kappa=0.0, C0_target=1.0, tol=1e-8)
    m = sel0.member.result
    # Anchor orbit (F0=0.1, F1=-0.55548098, F2=0) normalized to C0=1.
    anchor = shoot(params, {"F0": 0.1, "F2": 0.0}, "F1", (-2.0, -1e-6))
    from .extension import FamilyMember
    anchor_norm = normalize_to_C0(FamilyMember(0.1, anchor), 1.0)
    rel = abs(m.triple.F0 - anchor_norm.result.triple.F0) / abs(
        anchor_norm.result.triple.F0)
    sel1 = select_fbp_profile(params, kappa=-1.0, C0_target=1.0, tol=1e-8)
    distinct = abs(sel1.member.result.triple.F0 - m.triple.F0) > 1e-3
    ok = (rel <= 1e-3 and sel0.defect <= 1e-8 and sel1.defect <= 1e-8
          and distinct)
    return ok, (f"kappa=0 F0={m.triple.F0:.6g} vs anchor "
                f"{anchor_norm.result.triple.F0:.6g} (rel {rel:.2g}), "
                f"defects {sel0.defect:.2g}/{sel1.defect:.2g}, "
                f"kappa=-1 F0={sel1.member.result.triple.F0:.6g}")


CRITERIA = [
    criterion_01_f2_slice_shot,
    criterion_02_anchor_constant,
    criterion_03_both_slices,
    criterion_04_zero_jump_nonexistence,
    criterion_05_family_normalization,
    criterion_06_cubic_solutions,
    criterion_07_linearization_roots,
    criterion_08_euler_reference,
    criterion_09_tail_oscillation,
    criterion_10_regularized_problem,
    criterion_11_free_boundary_selection,
]


def run_all() -> list[CriterionResult]:
    return [fn() for fn in CRITERIA]
