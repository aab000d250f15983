"""Command-line front end: profile runs, shooting, scans, and CSV/SVG output.

Every run writes a manifest in the same ``key = value`` format the
--config option consumes, so any output is reproducible byte-for-byte by
re-running with its own manifest.  Exit codes: 0 success, 1 numerical
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance
from .blowup import (OriginSeed, ParameterRangeError, ProfileError,
                     SimilarityParams, TailFitError, final_time_profile,
                     solve_blowup_profile, solve_collapse_profile)
from .euler import EulerParams, euler_F, euler_characteristics
from .extension import (ShootConfig, ShootError, family_sweep,
                        normalize_to_C0, nonexistence_scan, shoot)
from .regpde import build_grid, evolve, sqrt_initial_field
from .shocks import (SelectionError, ShockSide, check_symmetry_breaking,
                     fbp_kappa, rh_speed, select_fbp_profile)

__all__ = ["run", "main", "write_csv", "write_svg", "format_float"]

OUT_ENV = "NDE_SHOCKKIT_OUT"


class UsageError(Exception):
    pass


def format_float(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(header: list[str], rows, path) -> None:
    """Rectangular CSV, '\n' newlines, floats at 17 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError("row length does not match header")
        lines.append(",".join(format_float(v) for v in row))
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#17becf", "#8c564b", "#e377c2"]


def write_svg(series: list[tuple[str, np.ndarray, np.ndarray]],
              axes: tuple[str, str, str], path) -> None:
    """Standalone deterministic SVG line plot.

    series: (label, x, y) tuples; axes: (title, xlabel, ylabel).
    """
    if not series:
        raise ValueError("at least one series required")
    title, xlabel, ylabel = axes
    W, H, M = 720.0, 480.0, 60.0
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(np.min(xs)), float(np.max(xs))
    y0, y1 = float(np.min(ys)), float(np.max(ys))
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return M + (x - x0) / (x1 - x0) * (W - 2 * M)

    def py(y):
        return H - M - (y - y0) / (y1 - y0) * (H - 2 * M)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W:g}" '
        f'height="{H:g}" viewBox="0 0 {W:g} {H:g}">',
        f'<rect width="{W:g}" height="{H:g}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-size="16">{title}</text>',
        f'<line x1="{M:g}" y1="{H - M:g}" x2="{W - M:g}" y2="{H - M:g}" '
        'stroke="black"/>',
        f'<line x1="{M:g}" y1="{M:g}" x2="{M:g}" y2="{H - M:g}" '
        'stroke="black"/>',
        f'<text x="{W / 2:.1f}" y="{H - 18:.1f}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>',
        f'<text x="18" y="{H / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {H / 2:.1f})">{ylabel}</text>',
        f'<text x="{M:g}" y="{H - M + 16:.1f}" font-size="10" '
        f'text-anchor="middle">{x0:.6g}</text>',
        f'<text x="{W - M:g}" y="{H - M + 16:.1f}" font-size="10" '
        f'text-anchor="middle">{x1:.6g}</text>',
        f'<text x="{M - 6:.1f}" y="{H - M:.1f}" font-size="10" '
        f'text-anchor="end">{y0:.6g}</text>',
        f'<text x="{M - 6:.1f}" y="{M:.1f}" font-size="10" '
        f'text-anchor="end">{y1:.6g}</text>',
    ]
    for i, (label, sx, sy) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{px(a):.3f},{py(b):.3f}"
                       for a, b in zip(np.asarray(sx, float),
                                       np.asarray(sy, float)))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.2"/>')
        parts.append(f'<text x="{W - M + 4:.1f}" y="{M + 14 * i + 10:.1f}" '
                     f'font-size="11" fill="{color}">{label}</text>')
    parts.append("</svg>")
    try:
        Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _parse_config_file(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(),
                                 start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _effective_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                      keys: list[str]) -> dict[str, str]:
    """Merge config-file values under explicit flags (flags win)."""
    cfg: dict[str, str] = {}
    if args.config:
        file_vals = _parse_config_file(Path(args.config))
        unknown = set(file_vals) - set(keys)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_vals)
    explicit = getattr(args, "_explicit", set())
    for key in keys:
        if key in explicit or key not in cfg:
            cfg[key] = str(getattr(args, key.replace("-", "_")))
    return {k: cfg[k] for k in keys}


def _out_dir(args) -> Path:
    if getattr(args, "_explicit", set()) and "out" in args._explicit:
        out = args.out
    else:
        out = os.environ.get(OUT_ENV, args.out)
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(out: Path, subcommand: str,
                    config: dict[str, str]) -> str:
    digest = hashlib.sha256(
        json.dumps([subcommand, sorted(config.items())]).encode()).hexdigest()
    lines = [f"# manifest for '{subcommand}' run {digest[:16]}",
             "# re-run with: nde-shock " + subcommand + " --config <this file>"]
    lines += [f"{k} = {v}" for k, v in config.items()]
    (out / f"{subcommand}-manifest.txt").write_text(
        "\n".join(lines) + "\n", encoding="utf-8")
    return digest[:16]


def _floats(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _track(parser: argparse.ArgumentParser) -> argparse.ArgumentParser:
    """Wrap actions so explicitly passed flags are recorded on the namespace."""
    original = parser.parse_args

    return parser


class _RecordingNamespace(argparse.Namespace):
    def __setattr__(self, name, value):
        if hasattr(self, "_parsing") and not name.startswith("_"):
            self._explicit.add(name.replace("_", "-"))
        object.__setattr__(self, name, value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nde-shock",
        description="Self-similar shock formation toolkit for u_t=(u u_x)_xx")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--config", default=None,
                       help="key = value config file (flags override)")
        p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("blowup", help="blow-up profiles from origin data")
    add_common(p)
    p.add_argument("--alpha", default="0.3",
                   help="similarity exponent(s), comma separated")
    p.add_argument("--slope", default="-10.0", help="origin slope f'(0) < 0")
    p.add_argument("--y-end", default="-200.0")
    p.add_argument("--rtol", default="1e-10")

    p = sub.add_parser("collapse", help="collapsing-shock profile from "
                                        "regular Cauchy data")
    add_common(p)
    p.add_argument("--alpha", default="0.2")
    p.add_argument("--f0", default="1.0")
    p.add_argument("--f1", default="-1.0")
    p.add_argument("--f2", default="0.0")
    p.add_argument("--y-end", default="-200.0")

    p = sub.add_parser("shoot", help="tune one extension Cauchy component")
    add_common(p)
    p.add_argument("--alpha", default="0.1")
    p.add_argument("--f0", default=None)
    p.add_argument("--f1", default=None)
    p.add_argument("--f2", default=None)
    p.add_argument("--tune", required=True, choices=["f1", "f2"])
    p.add_argument("--bracket", default=None, help="lo,hi for the tuned value")
    p.add_argument("--tol", default="1e-12")

    p = sub.add_parser("family", help="one-parameter continuation family")
    add_common(p)
    p.add_argument("--alpha", default="0.1")
    p.add_argument("--f0-list", default="0.5,1,2")
    p.add_argument("--normalize-c0", default="1.0")
    p.add_argument("--tol", default="1e-13")

    p = sub.add_parser("nonexist", help="zero-jump origin-series scan")
    add_common(p)
    p.add_argument("--alpha", default="0.1")
    p.add_argument("--a-grid", default="-10,-0.1,9",
                   help="lo,hi,count (log-spaced, all negative)")

    p = sub.add_parser("shock-conditions", help="evaluate jump conditions "
                                                "on one-sided triples")
    add_common(p)
    p.add_argument("--minus", required=True, help="F0,F1,F2 left of shock")
    p.add_argument("--plus", required=True, help="F0,F1,F2 right of shock")

    p = sub.add_parser("euler", help="first-order reference continuation")
    add_common(p)
    p.add_argument("--alpha", default="0.2")
    p.add_argument("--c0", default="1.0")
    p.add_argument("--t", default="1.0")
    p.add_argument("--y-min", default="-10.0")
    p.add_argument("--n", default="200")

    p = sub.add_parser("regpde", help="regularized problem, rescaled form")
    add_common(p)
    p.add_argument("--length", default="10.0")
    p.add_argument("--n", default="256")
    p.add_argument("--cfl", default="0.25")
    p.add_argument("--tau-end", default="1e-3")
    p.add_argument("--snapshots", default="", help="comma separated tau list")

    p = sub.add_parser("verify", help="run the acceptance suite")
    add_common(p)
    p.add_argument("--suite", default="primary", choices=["primary"])

    return parser


_CONFIG_KEYS = {
    "blowup": ["alpha", "slope", "y-end", "rtol", "out"],
    "collapse": ["alpha", "f0", "f1", "f2", "y-end", "out"],
    "shoot": ["alpha", "f0", "f1", "f2", "tune", "bracket", "tol", "out"],
    "family": ["alpha", "f0-list", "normalize-c0", "tol", "out"],
    "nonexist": ["alpha", "a-grid", "out"],
    "shock-conditions": ["minus", "plus", "out"],
    "euler": ["alpha", "c0", "t", "y-min", "n", "out"],
    "regpde": ["length", "n", "cfl", "tau-end", "snapshots", "out"],
    "verify": ["suite", "out"],
}


def _cmd_blowup(cfg, out):
    alphas = _floats(cfg["alpha"])
    slope = float(cfg["slope"])
    y_end = float(cfg["y-end"])
    rtol = float(cfg["rtol"])
    series = []
    for alpha in alphas:
        params = SimilarityParams(alpha)
        traj, tail = solve_blowup_profile(
            params, OriginSeed(A=slope), y_end=y_end, rtol=rtol, atol=rtol)
        ys = np.linspace(traj.span[0], traj.span[1], 4000)
        states = traj(ys)
        tag = f"{alpha:g}".replace(".", "p").replace("-", "m")
        write_csv(["y", "f", "fp", "fpp"],
                  np.column_stack([ys, states]), out / f"blowup-a{tag}.csv")
        write_csv(["alpha", "C0", "gamma", "omega", "C1", "C2", "delta_exp",
                   "residual"],
                  [[alpha, tail.C0, tail.gamma, tail.omega, tail.C1,
                    tail.C2, tail.delta_exp, tail.residual]],
                  out / f"blowup-a{tag}-tail.csv")
        series.append((f"alpha={alpha:g}", ys, states[:, 0]))
    write_svg(series, ("blow-up similarity profiles", "y", "f(y)"),
              out / "blowup.svg")
    print(f"blowup: {len(alphas)} profile(s) written to {out}")
    return 0


def _cmd_collapse(cfg, out):
    params = SimilarityParams(float(cfg["alpha"]))
    f0, f1, f2 = (float(cfg[k]) for k in ("f0", "f1", "f2"))
    traj, tail = solve_collapse_profile(params, f0, f1, f2,
                                        y_end=float(cfg["y-end"]))
    ys = np.linspace(traj.span[0], traj.span[1], 4000)
    states = traj(ys)
    write_csv(["y", "f", "fp", "fpp"], np.column_stack([ys, states]),
              out / "collapse.csv")
    write_csv(["alpha", "f0", "C0", "residual"],
              [[params.alpha, f0, tail.C0, tail.residual]],
              out / "collapse-tail.csv")
    write_svg([("collapse profile", ys, states[:, 0])],
              ("collapsing-shock profile", "y", "f(y)"), out / "collapse.svg")
    print(f"collapse: C0={tail.C0:.8g}")
    return 0


def _cmd_shoot(cfg, out):
    params = SimilarityParams(float(cfg["alpha"]))
    tune = cfg["tune"].upper().replace("F", "F")
    tuned = {"f1": "F1", "f2": "F2"}[cfg["tune"]]
    fixed = {}
    for name in ("f0", "f1", "f2"):
        comp = name.upper()
        if comp == tuned:
            continue
        if cfg.get(name) in (None, "None"):
            raise UsageError(f"--{name} is required when tuning {cfg['tune']}")
        fixed[comp] = float(cfg[name])
    if cfg.get("bracket") not in (None, "None"):
        lo, hi = _floats(cfg["bracket"])
    else:
        lo, hi = (-4.0, -1e-6) if tuned == "F1" else (-2.0, 2.0)
    res = shoot(params, fixed, tuned, (lo, hi), tol=float(cfg["tol"]))
    ys = np.linspace(res.trajectory.span[0], res.trajectory.span[1], 4000)
    states = res.trajectory(ys)
    write_csv(["y", "F", "Fp", "Fpp"], np.column_stack([ys, states]),
              out / "shoot.csv")
    write_csv(["alpha", "F0", "F1", "F2", "tuned", "tuned_value",
               "bracket_width", "C0", "iterations"],
              [[params.alpha, res.triple.F0, res.triple.F1, res.triple.F2,
                res.tuned, res.tuned_value, res.bracket_width, res.tail.C0,
                res.iterations]],
              out / "shoot-result.csv")
    write_svg([("tuned profile", ys, states[:, 0])],
              ("extension profile (tuned)", "y", "F(y)"), out / "shoot.svg")
    print(f"shoot: {res.tuned}* = {res.tuned_value:.10g} "
          f"(bracket width {res.bracket_width:.2g}, C0={res.tail.C0:.6g})")
    return 0


def _cmd_family(cfg, out):
    params = SimilarityParams(float(cfg["alpha"]))
    f0_list = _floats(cfg["f0-list"])
    target = float(cfg["normalize-c0"])
    fam = family_sweep(params, f0_list, tol=float(cfg["tol"]))
    if fam.failures:
        for F0, msg in fam.failures:
            print(f"family: FAILED F0={F0}: {msg}", file=sys.stderr)
        return 1
    rows = []
    for m in fam.members:
        norm = normalize_to_C0(m, target)
        rows.append([params.alpha, m.F0, m.result.triple.F1,
                     m.result.triple.F2, m.result.tail.C0,
                     norm.result.triple.F0, norm.result.tail.C0])
    write_csv(["alpha", "F0", "F1", "F2", "C0",
               "F0_normalized", "C0_normalized"], rows, out / "family.csv")
    print(f"family: {len(rows)} matched member(s), normalized to "
          f"C0={target:g}")
    return 0


def _cmd_nonexist(cfg, out):
    params = SimilarityParams(float(cfg["alpha"]))
    lo, hi, count = _floats(cfg["a-grid"])
    grid = -np.geomspace(-lo, -hi, int(count))
    report = nonexistence_scan(params, grid)
    rows = [[params.alpha, A, c.kind.value,
             c.trigger_y if c.trigger_y is not None else "nan"]
            for A, c in report.entries]
    write_csv(["alpha", "A", "classification", "trigger_y"], rows,
              out / "nonexist.csv")
    if report.matched_hits:
        print("nonexist: CONTRADICTION: matched zero-jump orbit(s) at "
              f"A={report.matched_hits}", file=sys.stderr)
        return 1
    print(f"nonexist: {len(rows)} orbit(s), zero matched (as expected)")
    return 0


def _cmd_shock_conditions(cfg, out):
    minus = ShockSide(*_floats(cfg["minus"]))
    plus = ShockSide(*_floats(cfg["plus"]))
    rh = rh_speed(minus, plus)
    holds, resid = check_symmetry_breaking(minus, plus, tol=1e-10)
    km = fbp_kappa(minus)
    kp = fbp_kappa(plus)
    write_csv(["lambda", "flux_imbalance", "matching_holds",
               "matching_residual", "kappa_minus", "kappa_plus"],
              [[rh.lam, rh.residual, int(holds), resid,
                km.kappa if km.kappa is not None else km.kind.value,
                kp.kappa if kp.kappa is not None else kp.kind.value]],
              out / "shock-conditions.csv")
    print(f"shock-conditions: lambda={rh.lam:.6g}, matching "
          f"{'holds' if holds else 'broken'} (residual {resid:.3g})")
    return 0


def _cmd_euler(cfg, out):
    p = EulerParams(alpha=float(cfg["alpha"]), C0=float(cfg["c0"]))
    t = float(cfg["t"])
    ys = np.linspace(float(cfg["y-min"]), 0.0, int(cfg["n"]))
    rows = []
    for y in ys:
        F = euler_F(y, p)
        u = euler_characteristics(y * t ** p.beta, t, p)
        rows.append([y, F, u / t ** p.alpha, abs(F - u / t ** p.alpha)])
    write_csv(["y", "F", "F_characteristics", "route_gap"], rows,
              out / "euler.csv")
    arr = np.asarray(rows)
    write_svg([("algebraic", arr[:, 0], arr[:, 1])],
              ("first-order continuation profile", "y", "F(y)"),
              out / "euler.svg")
    print(f"euler: max route gap {np.max(arr[:, 3]):.3g}")
    return 0


def _cmd_regpde(cfg, out):
    grid = build_grid(float(cfg["length"]), int(cfg["n"]))
    snaps = _floats(cfg["snapshots"]) if cfg["snapshots"] else []
    result = evolve(sqrt_initial_field(grid), grid,
                    tau_end=float(cfg["tau-end"]), cfl=float(cfg["cfl"]),
                    snapshot_times=snaps)
    for snap in result.snapshots:
        tag = f"{snap.tau:.6g}".replace(".", "p").replace("-", "m")
        write_csv(["y", "v"],
                  np.column_stack([grid.nodes, snap.values]),
                  out / f"regpde-tau{tag}.csv")
    write_csv(["L", "n", "cfl", "tau_end", "status", "steps", "data_tag"],
              [[grid.L, grid.n, float(cfg["cfl"]), float(cfg["tau-end"]),
                result.status, result.steps, "sqrt-abs-y"]],
              out / "regpde-run.csv")
    if result.status != "completed":
        print(f"regpde: {result.detail}", file=sys.stderr)
        return 1
    print(f"regpde: {len(result.snapshots)} snapshot(s), {result.steps} steps")
    return 0


def _cmd_verify(cfg, out):
    results = acceptance.run_all()
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.name}: {r.detail} ({r.elapsed:.1f}s)")
        ok = ok and r.passed
    return 0 if ok else 1


_COMMANDS = {
    "blowup": _cmd_blowup,
    "collapse": _cmd_collapse,
    "shoot": _cmd_shoot,
    "family": _cmd_family,
    "nonexist": _cmd_nonexist,
    "shock-conditions": _cmd_shock_conditions,
    "euler": _cmd_euler,
    "regpde": _cmd_regpde,
    "verify": _cmd_verify,
}


def run(argv) -> int:
    parser = _build_parser()
    ns = _RecordingNamespace()
    object.__setattr__(ns, "_explicit", set())
    object.__setattr__(ns, "_parsing", True)
    try:
        args = parser.parse_args(argv, namespace=ns)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    object.__setattr__(ns, "_parsing", False)
    # Defaults fill in after parsing marks everything; rebuild explicit set
    # from argv instead.
    explicit = set()
    for token in argv:
        if token.startswith("--"):
            explicit.add(token[2:].split("=", 1)[0])
    object.__setattr__(ns, "_explicit", explicit)

    try:
        cfg = _effective_config(args, parser, _CONFIG_KEYS[args.subcommand])
        out = _out_dir(args)
        _write_manifest(out, args.subcommand, cfg)
        return _COMMANDS[args.subcommand](cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ParameterRangeError as exc:
        print(f"usage error: {exc} (admissible alpha interval is "
              f"[-0.1, 0.5))", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ProfileError, ShootError, TailFitError, SelectionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
