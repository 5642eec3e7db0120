"""Command-line front end: every experiment as a subcommand.

Outputs are plain files (CSV trajectories, JSON reports, static SVG
scenes) written to --out; runs with identical arguments and seeds
produce byte-identical files.  Exit codes: 0 success, 2 usage error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from .errors import PlaneflowError
from .escape import (
    demo_antiholo_tract,
    escape_measure,
    poly_flow_summary,
    rubel_path,
    transverse_segment,
)
from .expr import constant_value, is_constant, parse_expr, to_text
from .flow import (
    ANTIHOLOMORPHIC,
    FORWARD,
    HOLOMORPHIC,
    REVERSED,
    FlowSpec,
    IntegratorConfig,
    Trajectory,
    antiholo_invariants,
    blowup_time_estimate,
    classify,
    conformal_clock_residual,
    integrate,
)
from .level import infinite_time_criterion, trace_level, transit_time
from .reports import write_report
from .svg import SvgScene, render_svg

__all__ = ["main", "run_cli"]


def parse_complex(text: str) -> complex:
    """Accept 're,im' pairs or expression-style literals like '1+2i'."""
    if "," in text:
        re_s, im_s = text.split(",", 1)
        return complex(float(re_s), float(im_s))
    expr = parse_expr(text)
    if not is_constant(expr):
        raise ValueError(f"{text!r} is not a constant")
    return constant_value(expr)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="relative tolerance override")
    p.add_argument("--tmax", type=float, default=None, help="integration time budget")
    p.add_argument("--radius", type=float, default=None, help="escape radius")
    p.add_argument("--seed", type=int, default=0, help="RNG seed where randomness appears")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--json", action="store_true", help="write a JSON report")
    p.add_argument("--svg", action="store_true", help="write an SVG scene")
    p.add_argument("--csv", action="store_true", help="write trajectory CSV")
    p.add_argument(
        "--window",
        type=str,
        default=None,
        help="plot window as 'cx,cy,halfwidth' (default: fit to data)",
    )


def _config(args) -> IntegratorConfig:
    cfg = IntegratorConfig()
    overrides = {}
    if args.tol is not None:
        overrides["rel_tol"] = args.tol
        overrides["abs_tol"] = args.tol * 1e-2
    if args.tmax is not None:
        overrides["t_max"] = args.tmax
    if args.radius is not None:
        overrides["escape_radius"] = args.radius
    return replace(cfg, **overrides) if overrides else cfg


def _spec_from_args(args) -> FlowSpec:
    kind = HOLOMORPHIC if args.kind == "holo" else ANTIHOLOMORPHIC
    text = args.f if args.f is not None else args.g
    if text is None:
        raise PlaneflowError("an expression is required (--f for holo, --g for antiholo)")
    direction = REVERSED if getattr(args, "reversed", False) else FORWARD
    return FlowSpec(kind, parse_expr(text), direction)


def write_trajectory_csv(traj: Trajectory, path) -> None:
    lines = ["t,re_z,im_z,abs_z,step_error"]
    for (t, z), err in zip(traj.samples, traj.errors):
        lines.append(f"{t!r},{z.real!r},{z.imag!r},{abs(z)!r},{err!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _scene_window(args, points):
    if args.window:
        cx, cy, hw = (float(v) for v in args.window.split(","))
        return complex(cx, cy), hw
    if not points:
        return 0j, 5.0
    re_lo = min(p.real for p in points)
    re_hi = max(p.real for p in points)
    im_lo = min(p.imag for p in points)
    im_hi = max(p.imag for p in points)
    center = complex(0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi))
    hw = 0.55 * max(re_hi - re_lo, im_hi - im_lo, 1e-6)
    return center, hw


def _poly_roots(coeffs, iters=200):
    """Durand-Kerner roots of an ascending-coefficient polynomial."""
    c = [complex(v) for v in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    n = len(c) - 1
    if n < 1:
        return []
    lead = c[-1]
    mon = [v / lead for v in c]
    roots = [(0.4 + 0.9j) ** k for k in range(1, n + 1)]
    for _ in range(iters):
        moved = 0.0
        for i in range(n):
            p = 0j
            for v in reversed(mon):
                p = p * roots[i] + v
            q = mon[-1]
            for j in range(n):
                if j != i:
                    q *= roots[i] - roots[j]
            if q == 0:
                continue
            step = p / q
            roots[i] -= step
            moved = max(moved, abs(step))
        if moved < 1e-13:
            break
    return roots


def _termination_line(term) -> str:
    kind = term.name
    if kind == "FiniteTimeBlowup":
        return f"FiniteTimeBlowup T≈{term.t_est:.4f}"
    if kind == "ReachedRadius":
        return f"ReachedRadius t_exit≈{term.t_exit:.4f}"
    if kind == "Periodic":
        return f"Periodic period≈{term.period:.4f}"
    if kind == "FixedPointApproach":
        z = term.z_star
        return f"FixedPointApproach z*≈{z.real:.6g}{z.imag:+.6g}i"
    return kind


# ---------------------------------------------------------------------------
# subcommands


def _cmd_simulate(args) -> int:
    cfg = _config(args)
    spec = _spec_from_args(args)
    z0 = parse_complex(args.z0)
    traj = integrate(spec, z0, cfg)
    term = classify(traj, cfg)
    traj = replace(traj, termination=term)
    print(_termination_line(term))
    args.out.mkdir(parents=True, exist_ok=True)
    if args.csv or not (args.json or args.svg):
        write_trajectory_csv(traj, args.out / "trajectory.csv")
    if args.json:
        write_report(traj, args.out / "trajectory.json")
    if args.svg:
        scene = SvgScene(*_scene_window(args, [z for _, z in traj.samples]))
        css = "blowup" if term.name == "FiniteTimeBlowup" else "trajectory"
        scene.add_polyline([z for _, z in traj.samples], css)
        scene.add_marker(z0, "seed")
        for root in _poly_roots_of(spec):
            scene.add_marker(root, "zero")
        scene.add_legend(f"dz/dt = {_rhs_text(spec)}")
        scene.add_legend(_termination_line(term))
        (args.out / "trajectory.svg").write_text(render_svg(scene))
    return 0


def _poly_roots_of(spec: FlowSpec):
    from .expr import poly_coeffs

    coeffs = poly_coeffs(spec.func)
    return _poly_roots(coeffs) if coeffs else []


def _rhs_text(spec: FlowSpec) -> str:
    body = to_text(spec.func)
    inner = body if spec.kind == HOLOMORPHIC else f"conj({body})"
    return inner if spec.time_direction == FORWARD else f"-({inner})"


def _cmd_classify(args) -> int:
    cfg = _config(args)
    spec = _spec_from_args(args)
    z0 = parse_complex(args.z0)
    traj = integrate(spec, z0, cfg)
    est = blowup_time_estimate(traj, cfg)
    term = classify(traj, cfg)
    print(_termination_line(term))
    if est.conclusive:
        print(f"  escape time {est.t_est!r} ± {est.t_err:.3g} ({est.method})")
    else:
        print(f"  no finite escape time concluded: {est.note}")
    for r, t in est.exit_times:
        print(f"  radius {r:g} crossed at t={t!r}")
    args.out.mkdir(parents=True, exist_ok=True)
    if args.json:
        write_report(est, args.out / "classify.json")
    if args.csv:
        write_trajectory_csv(traj, args.out / "trajectory.csv")
    return 0


def _cmd_level_trace(args) -> int:
    cfg = _config(args)
    if args.radius is None:
        cfg = replace(cfg, escape_radius=1e9)
    big_g = parse_expr(args.G)
    z0 = parse_complex(args.start)
    curve = trace_level(big_g, z0, args.Xmax, cfg)
    print(
        f"level curve: {len(curve)} samples, Im G = {curve.beta!r}, "
        f"X in [{curve.x_start!r}, {curve.x_end!r}], stop: {curve.stop_reason}"
    )
    args.out.mkdir(parents=True, exist_ok=True)
    lines = ["x,re_z,im_z"]
    for x, z in curve.samples:
        lines.append(f"{x!r},{z.real!r},{z.imag!r}")
    (args.out / "level.csv").write_text("\n".join(lines) + "\n")
    if args.json:
        write_report(curve, args.out / "level.json")
    if args.svg:
        scene = SvgScene(*_scene_window(args, list(curve.zs)))
        scene.add_polyline(curve.zs, "level")
        scene.add_marker(z0, "seed")
        scene.add_legend(f"Im G = {curve.beta:.6g}, G = {to_text(big_g)}")
        (args.out / "level.svg").write_text(render_svg(scene))
    return 0


def _cmd_transit(args) -> int:
    cfg = _config(args)
    if args.radius is None:
        cfg = replace(cfg, escape_radius=1e9)
    big_g = parse_expr(args.G)
    z0 = parse_complex(args.start)
    curve = trace_level(big_g, z0, args.Xmax, cfg)
    report = transit_time(curve, cfg)
    crit = infinite_time_criterion(curve)
    if math.isfinite(report.quadrature_time):
        print(
            f"transit over X in [{report.x_range[0]:.6g}, {report.x_range[1]:.6g}]: "
            f"quadrature {report.quadrature_time!r}, flow {report.ode_time!r}, "
            f"relative gap {report.relative_gap:.3g}"
        )
    else:
        print(f"transit integrand diverges near X={report.divergence_witness!r}")
    if crit.fires:
        print("slow-growth criterion fires: transit to infinity is infinite")
    args.out.mkdir(parents=True, exist_ok=True)
    write_report(report, args.out / "transit.json")
    return 0


def _cmd_measure(args) -> int:
    cfg = _config(args)
    f = parse_expr(args.f)
    z0 = parse_complex(args.z0)
    collect = args.keep if args.svg else 0
    report = escape_measure(
        f, z0, args.delta, args.N, cfg, seed=args.seed, collect=collect
    )
    print(
        f"{args.N} samples on the transverse segment (delta={args.delta:g}, seed={args.seed}): "
        f"finite-time fraction {report.finite_time_fraction!r}"
    )
    for name in sorted(report.counts):
        print(f"  {name}: {report.counts[name]}")
    args.out.mkdir(parents=True, exist_ok=True)
    write_report(report, args.out / "measure.json")
    if args.svg:
        seg = transverse_segment(f, z0, args.delta, 64, cfg)
        points = [z for _, z in seg.samples]
        for _, traj, _ in report.trajectories:
            points.extend(z for _, z in traj.samples)
        scene = SvgScene(*_scene_window(args, points))
        for _, traj, name in report.trajectories:
            css = "blowup" if name == "FiniteTimeBlowup" else "trajectory"
            scene.add_polyline([z for _, z in traj.samples], css)
        scene.add_polyline([z for _, z in seg.samples], "segment")
        scene.add_marker(z0, "seed")
        scene.add_legend(f"finite-time fraction {report.finite_time_fraction:.4g}")
        (args.out / "measure.svg").write_text(render_svg(scene))
    return 0


def _cmd_rubel(args) -> int:
    cfg = _config(args)
    if args.radius is None:
        cfg = replace(cfg, escape_radius=1e9)
    f = parse_expr(args.f)
    seed_pt = parse_complex(args.seed_point)
    report = rubel_path(
        f,
        args.D,
        seed_pt,
        args.t_end,
        cfg,
        m_max=args.m_max,
        c_values=tuple(args.c),
    )
    print(
        f"path traced to t={report.samples[-1][0]:.6g} "
        f"(|z| up to {abs(report.samples[-1][1]):.6g}); "
        f"Re f strictly increasing: {report.monotone}"
    )
    for m, points in sorted(report.growth_ratios.items()):
        if points:
            r, q = points[-1]
            print(f"  m={m}: log|f^({m})|/log|z| = {q:.3f} at |z|={r:.4g}")
    for t in report.tail_integrals:
        print(
            f"  m={t.m} c={t.c:g}: partial {t.partial_sum:.6g}, "
            f"window ratio {t.window_ratio:.4f}, finite: {t.finite}"
        )
    args.out.mkdir(parents=True, exist_ok=True)
    write_report(report, args.out / "rubel.json")
    return 0


def _cmd_poly_summary(args) -> int:
    kind = HOLOMORPHIC if args.kind == "holo" else ANTIHOLOMORPHIC
    coeffs = [parse_complex(v) for v in args.coeffs.split(",")]
    summary = poly_flow_summary(coeffs, kind)
    if kind == HOLOMORPHIC:
        if summary.degree >= 2:
            dirs = ", ".join(f"{a:.6g}" for a in summary.finite_time_directions)
            print(
                f"degree {summary.degree}: {summary.degree - 1} finite-time escape "
                f"direction(s) at arg z = {dirs}"
            )
        else:
            print("degree 1: no finite-time escape directions")
    else:
        verdict = "finite" if summary.finite_transit else "infinite"
        print(f"degree {summary.degree}: transit time to infinity is {verdict}")
    args.out.mkdir(parents=True, exist_ok=True)
    write_report(summary, args.out / "poly_summary.json")
    return 0


def _cmd_demo(args) -> int:
    results = run_demo_suite(verbose=True)
    failed = [name for name, ok, _ in results if not ok]
    print()
    print(f"{len(results) - len(failed)}/{len(results)} demos passed")
    return 0 if not failed else 3


# ---------------------------------------------------------------------------
# built-in demo suite (the CLI face of the acceptance checks)


def _demo_closed_form_escape():
    import cmath as _cmath

    spec = FlowSpec(HOLOMORPHIC, parse_expr("-exp(-z)"))
    traj = integrate(spec, 0.0, IntegratorConfig())
    sup = max(
        abs(_cmath.exp(z) - (1.0 - t)) for t, z in traj.samples if t <= 0.99
    )
    est = blowup_time_estimate(traj, IntegratorConfig())
    ok = sup <= 1e-6 and est.conclusive and abs(est.t_est - 1.0) <= 1e-4
    return ok, f"exp(z(t)) = exp(z0) - t: sup dev {sup:.2e}, escape T={est.t_est:.6f}"


def _demo_quadratic_blowup():
    cfg = IntegratorConfig(escape_radius=100.0)
    spec = FlowSpec(HOLOMORPHIC, parse_expr("z^2"))
    devs = []
    for z0, want in ((1.0, 1.0), (2.0, 0.5)):
        est = blowup_time_estimate(integrate(spec, z0, cfg), cfg)
        devs.append(abs(est.t_est - want))
    ok = all(d <= 1e-4 for d in devs)
    return ok, f"dz/dt = z^2: T(1)=1, T(2)=0.5 within {max(devs):.2e}"


def _demo_conformal_clock():
    worst = 0.0
    cases = [
        ("z", (1.0, 1j, 1 + 1j, -2 + 0.5j, 0.3 - 0.7j)),
        ("z^2 - 1", (0.5j, 2.0, -0.3 + 0.8j, 0.2 - 0.6j, 1.5 + 0.5j)),
        ("exp(z)", (0.0, 0.5j, -1.0, 0.3 - 0.2j, -0.5 + 0.4j)),
    ]
    for text, seeds in cases:
        spec = FlowSpec(HOLOMORPHIC, parse_expr(text))
        for z0 in seeds:
            traj = integrate(spec, z0, IntegratorConfig(t_max=3.0))
            worst = max(worst, conformal_clock_residual(traj))
    ok = worst <= 1e-5
    return ok, f"clock integral of dz/f tracks t: worst residual {worst:.2e}"


def _demo_antiholo_dichotomy():
    spec1 = FlowSpec(ANTIHOLOMORPHIC, parse_expr("z"))
    pts = []
    for radius in (10.0, 100.0, 1000.0, 10000.0):
        cfg = IntegratorConfig(escape_radius=radius, t_max=100.0)
        traj = integrate(spec1, 1.0, cfg)
        pts.append((math.log(radius), traj.t_end))
    n = len(pts)
    sx = sum(x for x, _ in pts) / n
    sy = sum(y for _, y in pts) / n
    slope = sum((x - sx) * (y - sy) for x, y in pts) / sum((x - sx) ** 2 for x, _ in pts)
    spec2 = FlowSpec(ANTIHOLOMORPHIC, parse_expr("z^2"))
    cfg2 = IntegratorConfig(escape_radius=1e6, t_max=10.0)
    t2 = integrate(spec2, 1.0, cfg2).t_end
    ok = abs(slope - 1.0) <= 0.05 and 0.99 <= t2 <= 1.0
    return ok, f"deg 1: time-to-R slope vs ln R = {slope:.4f}; deg 2: time to 1e6 = {t2:.6f}"


def _demo_transit_gap():
    gaps = []
    curve = trace_level(parse_expr("z^2 / 2"), 1.0, 50.0, IntegratorConfig(escape_radius=100.0))
    gaps.append(transit_time(curve, IntegratorConfig(escape_radius=100.0)).relative_gap)
    cfg3 = IntegratorConfig(escape_radius=1e7, t_max=10.0)
    curve3 = trace_level(parse_expr("z^3 / 3"), 1.0, 1e18 / 3.0, cfg3)
    gaps.append(transit_time(curve3, cfg3).relative_gap)
    ok = all(g <= 1e-3 for g in gaps)
    return ok, f"transit quadrature vs flow time: gaps {', '.join(f'{g:.2e}' for g in gaps)}"


def _demo_tract():
    rep = demo_antiholo_tract()
    want = -math.log(1.0 - math.exp(-1.0))
    fr, ir = rep.finite_run, rep.infinite_run
    times_ok = all(t >= r - 2.0 for r, t in ir.times_to_radius)
    ok = (
        fr.termination == "FiniteTimeBlowup"
        and abs(fr.t_est - want) <= 1e-3
        and not ir.conclusive
        and times_ok
        and max(fr.im_drift, ir.im_drift) <= 1e-6
    )
    return ok, (
        f"exp(-z)+1: left escape T={fr.t_est:.5f} (target {want:.5f}), "
        f"right escape needs t >= R-2 at R=10,100,1000: {times_ok}"
    )


def _demo_measure_zero(n_samples=2000):
    cfg = IntegratorConfig(escape_radius=10.0, t_max=50.0)
    rep = escape_measure(parse_expr("-exp(-z)"), 0.0, 1.0, n_samples, cfg, seed=20260808)
    ok = rep.finite_time_fraction <= 0.01
    return ok, f"finite-time set on the segment: fraction {rep.finite_time_fraction!r} of {n_samples}"


def _demo_rubel():
    import cmath as _cmath

    cfg = IntegratorConfig(escape_radius=1e9)
    t_end = math.exp(110.0)
    ok = True
    details = []
    for d in (0.0, 5.0):
        seed = 2.0 if d == 0.0 else _cmath.log(10 + 1j * d)
        rep = rubel_path(parse_expr("exp(z)"), d, seed, t_end, cfg)
        ratios_ok = True
        increasing_ok = True
        for m, points in rep.growth_ratios.items():
            at100 = [q for r, q in points if r >= 100.0]
            ratios_ok &= bool(at100) and min(at100) > 20.0
            r_end = points[-1][0]
            decade = [q for r, q in points if r >= r_end / 10.0]
            increasing_ok &= all(a < b for a, b in zip(decade, decade[1:]))
        tails_ok = all(t.finite for t in rep.tail_integrals)
        ok &= rep.monotone and ratios_ok and increasing_ok and tails_ok
        details.append(f"D={d:g}: monotone {rep.monotone}, tails finite {tails_ok}")
    return ok, "; ".join(details)


def _demo_criterion():
    cfg = IntegratorConfig(escape_radius=1e4)
    fired = infinite_time_criterion(trace_level(parse_expr("z"), 1.0, 700.0, cfg)).fires
    flat = infinite_time_criterion(trace_level(parse_expr("z^2 / 2"), 1.0, 2e5, cfg)).fires
    grow = infinite_time_criterion(
        trace_level(parse_expr("z^3 / 3"), 1.0, 601.0**3 / 3.0, cfg)
    ).fires
    ok = fired and not flat and not grow
    return ok, f"|G|/|z|^2 test: fires(G=z)={fired}, fires(z^2/2)={flat}, fires(z^3/3)={grow}"


def _demo_properties():
    spec = FlowSpec(HOLOMORPHIC, parse_expr("z^2 - 1"))
    traj = integrate(spec, 0.5j, IntegratorConfig(t_max=1.5))
    rev = FlowSpec(HOLOMORPHIC, parse_expr("z^2 - 1"), REVERSED)
    back = integrate(rev, traj.z_end, IntegratorConfig(t_max=traj.t_end))
    ret = abs(back.z_end - 0.5j)
    period = integrate(FlowSpec(HOLOMORPHIC, parse_expr("i*z")), 1.0, IntegratorConfig()).termination
    period_dev = abs(period.period - 2.0 * math.pi) if period.name == "Periodic" else math.inf
    spec_a = FlowSpec(ANTIHOLOMORPHIC, parse_expr("z^2"))
    drift = antiholo_invariants(integrate(spec_a, 1 + 1j, IntegratorConfig(t_max=2.0))).im_drift
    ok = ret <= 1e-5 and period_dev <= 1e-4 and drift <= 1e-6
    return ok, f"reversal return {ret:.2e}; period dev {period_dev:.2e}; Im G drift {drift:.2e}"


_DEMOS = (
    ("closed-form-escape", "exp(z(t)) = exp(z0) - t forces escape at T = Re exp(z0)", _demo_closed_form_escape),
    ("quadratic-blowup", "dz/dt = z^2 escapes at T = 1/z0 (w-chart check)", _demo_quadratic_blowup),
    ("conformal-clock", "integral of dz/f along a trajectory equals elapsed time", _demo_conformal_clock),
    ("antiholo-dichotomy", "conj-flow transit: infinite for degree 1, finite for degree >= 2", _demo_antiholo_dichotomy),
    ("transit-quadrature", "transit time integral of |dz/dX|^2 dX matches the flow", _demo_transit_gap),
    ("tract-demo", "exp(-z)+1: finite-time escape left, infinite-time right", _demo_tract),
    ("measure-zero", "finite-time escape set on a transverse segment has tiny measure", _demo_measure_zero),
    ("rubel-growth", "path where f and derivatives outgrow every power, reciprocals integrable", _demo_rubel),
    ("slow-growth-criterion", "|G(z)| = o(|z|^2) along the curve forces infinite transit", _demo_criterion),
    ("property-suite", "time reversal, rotation period, Im G conservation", _demo_properties),
)


def run_demo_suite(verbose: bool = False):
    results = []
    for name, claim, fn in _DEMOS:
        try:
            ok, detail = fn()
        except PlaneflowError as exc:
            ok, detail = False, f"error: {exc}"
        results.append((name, ok, detail))
        if verbose:
            status = "PASS" if ok else "FAIL"
            print(f"[{status}] {name}: {claim}")
            print(f"       {detail}")
    return results


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planeflow",
        description="simulate plane flows of entire functions and their escape behavior",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate one trajectory and classify it")
    p.add_argument("--f", help="holomorphic flow expression")
    p.add_argument("--g", help="antiholomorphic flow expression")
    p.add_argument("--z0", required=True, help="start point 're,im' or 'a+bi'")
    p.add_argument("--kind", choices=("holo", "antiholo"), default="holo")
    p.add_argument("--reversed", action="store_true", help="reverse time")
    _add_common(p)
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("classify", help="integrate and report escape-time analysis")
    p.add_argument("--f", help="holomorphic flow expression")
    p.add_argument("--g", help="antiholomorphic flow expression")
    p.add_argument("--z0", required=True)
    p.add_argument("--kind", choices=("holo", "antiholo"), default="holo")
    p.add_argument("--reversed", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("level-trace", help="trace a level curve of Im G")
    p.add_argument("--G", required=True, help="potential whose level curve is traced")
    p.add_argument("--start", required=True, help="start point")
    p.add_argument("--Xmax", type=float, required=True, help="target Re G")
    _add_common(p)
    p.set_defaults(fn=_cmd_level_trace)

    p = sub.add_parser("transit", help="transit time along a level curve")
    p.add_argument("--G", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--Xmax", type=float, required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_transit)

    p = sub.add_parser("measure", help="Monte Carlo escape measure on a transverse segment")
    p.add_argument("--f", required=True)
    p.add_argument("--z0", required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--keep", type=int, default=40, help="trajectories kept for the SVG")
    _add_common(p)
    p.set_defaults(fn=_cmd_measure)

    p = sub.add_parser("rubel", help="trace a growth path where f - iD is real increasing")
    p.add_argument("--f", required=True)
    p.add_argument("--D", type=float, default=0.0)
    p.add_argument("--seed-point", required=True, help="seed inside the large-|f| tract")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--c", type=float, action="append", default=None,
                   help="exponent for the reciprocal tail integral (repeatable)")
    _add_common(p)
    p.set_defaults(fn=_cmd_rubel)

    p = sub.add_parser("poly-summary", help="predicted escape structure of a polynomial flow")
    p.add_argument("--coeffs", required=True, help="ascending coefficients 'a0,a1,...'")
    p.add_argument("--kind", choices=("holo", "antiholo"), default="holo")
    _add_common(p)
    p.set_defaults(fn=_cmd_poly_summary)

    p = sub.add_parser("demo", help="run the built-in example suite and print pass/fail")
    p.add_argument("suite", nargs="?", default="all", help="suite name (default: all)")
    p.set_defaults(fn=_cmd_demo)

    return parser


# options whose values are expressions or points and may begin with '-'
_VALUE_OPTS = ("--f", "--g", "--G", "--z0", "--start", "--seed-point", "--coeffs", "--window")


def _join_expression_values(argv):
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def run_cli(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_expression_values(list(argv)))
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "c", None) is None and hasattr(args, "c"):
        args.c = [0.5, 1.0]
    try:
        return args.fn(args)
    except PlaneflowError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
