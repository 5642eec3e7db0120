"""Escape experiments: transverse sampling, Monte Carlo measure of
finite-time escape, the polynomial transit dichotomy, and paths on
which a function and its derivatives all grow.

The transverse segment through z0 is the preimage of the imaginary
axis segment (-i*delta, i*delta) under the local clock primitive
F(z) = integral of du/f, traced by integrating dz/dy = i*f(z); uniform
sampling in y then matches the measure statement being tested.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import PlaneflowError, SegmentTruncated, TractViolation
from .expr import FuncExpr, compile_fn, derivative, to_text
from .flow import (
    ANTIHOLOMORPHIC,
    HOLOMORPHIC,
    FlowSpec,
    IntegratorConfig,
    antiholo_invariants,
    blowup_time_estimate,
    classify,
    drive_field,
    integrate,
)
from .jets import eval_jet
from .level import point_on_level, trace_level

__all__ = [
    "EscapeMeasureReport",
    "GrowthPathReport",
    "PolyFlowSummary",
    "TailIntegral",
    "TractDemoReport",
    "TractRun",
    "TransverseSegment",
    "demo_antiholo_tract",
    "escape_measure",
    "poly_flow_summary",
    "rubel_path",
    "transverse_segment",
]


# ---------------------------------------------------------------------------
# transverse segment


@dataclass(frozen=True)
class TransverseSegment:
    func: FuncExpr
    z0: complex
    delta: float
    samples: tuple  # (y, z) with y ascending, z(0) = z0


def _segment_point(fe, z0, y, cfg) -> complex:
    """Point of the transverse segment at parameter y (integrates dz/dy = i f)."""
    if y == 0.0:
        return complex(z0)
    sgn = 1.0 if y > 0 else -1.0
    rhs = lambda z: sgn * 1j * fe(z)
    res = drive_field(
        rhs,
        z0,
        cfg,
        t_stop=abs(y),
        event=lambda z: 1e-9 * (1.0 + abs(z)) - abs(fe(z)),
    )
    if res.status == "event":
        raise SegmentTruncated(abs(res.samples[-1][0]), res.samples[-1][1])
    if res.status != "t_stop":
        raise PlaneflowError(f"segment tracing stopped early ({res.status})")
    return res.samples[-1][1]


def transverse_segment(
    f: FuncExpr,
    z0: complex,
    delta: float,
    n: int,
    cfg: Optional[IntegratorConfig] = None,
) -> TransverseSegment:
    """Trace the segment crossing the trajectory through z0 at right angles.

    Samples n+1 equispaced parameter values on [-delta, delta]; n must
    be even so the grid contains y = 0 (where the segment passes through
    z0 exactly).  Meeting a zero of f raises SegmentTruncated with the
    parameter span that was achieved.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n < 2 or n % 2:
        raise ValueError("n must be an even integer >= 2")
    cfg = cfg or IntegratorConfig()
    z0 = complex(z0)
    fe = compile_fn(f)
    if abs(fe(z0)) <= 1e-15 * (1.0 + abs(z0)):
        raise ValueError("f vanishes at z0; the segment is undefined")
    half = n // 2
    step = delta / half
    out = {0: z0}
    for sgn in (1, -1):
        z = z0
        for k in range(1, half + 1):
            res = drive_field(
                (lambda z_, s=float(sgn): s * 1j * fe(z_)),
                z,
                cfg,
                t_stop=step,
                event=lambda z_: 1e-9 * (1.0 + abs(z_)) - abs(fe(z_)),
            )
            if res.status == "event":
                achieved = (k - 1) * step + res.samples[-1][0]
                raise SegmentTruncated(achieved, res.samples[-1][1])
            if res.status != "t_stop":
                raise PlaneflowError(f"segment tracing stopped early ({res.status})")
            z = res.samples[-1][1]
            out[sgn * k] = z
    samples = tuple((k * step, out[k]) for k in range(-half, half + 1))
    return TransverseSegment(f, z0, delta, samples)


# ---------------------------------------------------------------------------
# escape-measure Monte Carlo


@dataclass(frozen=True)
class EscapeMeasureReport:
    delta: float
    n_samples: int
    seed: int
    counts: dict
    finite_time_fraction: float
    trajectories: tuple = ()  # (y, Trajectory, classified-name) when collected


def escape_measure(
    f: FuncExpr,
    z0: complex,
    delta: float,
    n_samples: int,
    cfg: Optional[IntegratorConfig] = None,
    *,
    seed: int = 0,
    collect: int = 0,
) -> EscapeMeasureReport:
    """Sample the transverse segment uniformly and tabulate trajectory fates.

    Deterministic for a fixed seed.  Per-sample failures land in an
    ``error`` bucket instead of aborting the sweep; the reported
    fraction counts only conclusive finite-time escapes.
    """
    cfg = cfg or IntegratorConfig()
    # validates the preconditions (f nonzero on a coarse version of the segment)
    transverse_segment(f, z0, delta, 16, cfg)
    fe = compile_fn(f)
    spec = FlowSpec(HOLOMORPHIC, f)
    rng = random.Random(seed)
    counts: dict = {}
    kept = []
    for i in range(n_samples):
        y = rng.uniform(-delta, delta)
        try:
            zy = _segment_point(fe, z0, y, cfg)
            traj = integrate(spec, zy, cfg)
            term = classify(traj, cfg)
            name = term.name
        except PlaneflowError:
            name = "error"
            traj = None
        counts[name] = counts.get(name, 0) + 1
        if traj is not None and len(kept) < collect:
            kept.append((y, traj, name))
    fraction = counts.get("FiniteTimeBlowup", 0) / n_samples if n_samples else 0.0
    return EscapeMeasureReport(delta, n_samples, seed, counts, fraction, tuple(kept))


# ---------------------------------------------------------------------------
# polynomial dichotomy


@dataclass(frozen=True)
class PolyFlowSummary:
    kind: str
    degree: int
    finite_time_directions: tuple  # escape angles (holomorphic, degree >= 2)
    finite_transit: Optional[bool]  # antiholomorphic verdict


def poly_flow_summary(coeffs: Sequence[complex], kind: str) -> PolyFlowSummary:
    """Predicted escape structure of a polynomial flow.

    Holomorphic, degree n >= 2: n-1 rays of finite-time escape, along
    the angles where the leading term a_n e^{i(n-1)theta} is real and
    positive (dominant balance of dz/dt = a_n z^n).  Antiholomorphic:
    the transit to infinity is finite exactly when n >= 2.
    """
    if kind not in (HOLOMORPHIC, ANTIHOLOMORPHIC):
        raise ValueError(f"unknown flow kind {kind!r}")
    c = [complex(a) for a in coeffs]
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    degree = len(c) - 1
    if degree < 1:
        raise ValueError("polynomial degree must be at least 1")
    if kind == ANTIHOLOMORPHIC:
        return PolyFlowSummary(kind, degree, (), degree >= 2)
    if degree == 1:
        return PolyFlowSummary(kind, degree, (), None)
    a_n = c[-1]
    base = -cmath_phase(a_n) / (degree - 1)
    tau = 2.0 * math.pi
    directions = sorted(
        (base + tau * k / (degree - 1)) % tau for k in range(degree - 1)
    )
    return PolyFlowSummary(kind, degree, tuple(directions), None)


def cmath_phase(v: complex) -> float:
    return math.atan2(v.imag, v.real)


# ---------------------------------------------------------------------------
# growth paths (f and all derivatives large, with integrable reciprocals)


@dataclass(frozen=True)
class TailIntegral:
    m: int
    c: float
    partial_sum: float
    window_ratio: float
    tail_bound: float
    finite: bool


@dataclass(frozen=True)
class RubelPathReport:
    func: FuncExpr
    d_shift: float
    samples: tuple  # (t, z) with f(z) = t + i*d_shift
    monotone: bool
    im_deviation: float
    growth_ratios: dict  # m -> tuple of (|z|, log|f^(m)(z)| / log|z|)
    tail_integrals: tuple


def rubel_path(
    f: FuncExpr,
    d_shift: float,
    z_seed: complex,
    t_end: float,
    cfg: Optional[IntegratorConfig] = None,
    *,
    m_max: int = 3,
    c_values: Sequence[float] = (0.5, 1.0),
) -> RubelPathReport:
    """Trace the path on which f(z) = t + i*d_shift with t increasing.

    The seed must already satisfy the tract conditions (f - i*d_shift
    approximately real positive, f' nonzero); tracing follows
    dz/dt = 1/f'(z) with Newton correction of Im f back to d_shift.
    Derivative growth is recorded as log|f^(m)|/log|z|, evaluated
    through the quotient f^(m)/f from one jet so only log|f| (known
    exactly on the path) carries the large magnitude.  Tail integrals of
    |f^(m)|^(-c) |dz| report a partial sum plus a geometric bound from
    the dyadic-window decay ratio, never a bare claim of convergence.
    """
    cfg = cfg or IntegratorConfig()
    z_seed = complex(z_seed)
    fe = compile_fn(f)
    fpe = compile_fn(derivative(f))
    v = fe(z_seed)
    if abs(v.imag - d_shift) > 1e-6 * (1.0 + abs(v)):
        raise TractViolation(
            f"seed is off the level line: Im f = {v.imag!r}, expected {d_shift!r}"
        )
    if v.real <= 0:
        raise TractViolation("seed must have Re f > 0 (f - iD real positive)")
    if abs(fpe(z_seed)) < 1e-10 * (1.0 + abs(v)):
        raise TractViolation("f' vanishes at the seed")
    if t_end <= v.real:
        raise ValueError("t_end must exceed Re f at the seed")

    curve = trace_level(f, z_seed, t_end, cfg)
    if curve.stop_reason == "critical_point":
        raise TractViolation("f' vanished along the path")

    ts, zs = curve.xs, curve.zs
    vs = [fe(z) for z in zs]
    im_dev = max(abs(w.imag - d_shift) for w in vs)
    monotone = all(b.real > a.real for a, b in zip(vs, vs[1:])) and all(
        w.real > 0 for w in vs
    )

    def log_abs_deriv(t, jet, m):
        # log|f^(m)| = log|f^(m)/f| + log|f|; on the path |f| = |t + iD|
        if jet.coeffs[m] == 0:
            return -math.inf
        quotient = jet.coeffs[m] * math.factorial(m) / jet.coeffs[0]
        return math.log(abs(quotient)) + 0.5 * math.log(t * t + d_shift * d_shift)

    growth: dict = {m: [] for m in range(m_max + 1)}
    next_mark = abs(zs[0])
    marked = [False] * len(zs)
    for i, (t, z) in enumerate(zip(ts, zs)):
        r = abs(z)
        if r < next_mark or r <= 1.0:
            continue
        marked[i] = True
        jet = eval_jet(f, z, m_max)
        for m in range(m_max + 1):
            growth[m].append((r, log_abs_deriv(t, jet, m) / math.log(r)))
        next_mark = r * 1.3
    if not marked[-1] and abs(zs[-1]) > 1.0:
        jet = eval_jet(f, zs[-1], m_max)
        r = abs(zs[-1])
        for m in range(m_max + 1):
            growth[m].append((r, log_abs_deriv(ts[-1], jet, m) / math.log(r)))

    # Simpson nodes (endpoints + corrector-refined midpoints) with their
    # jets, shared by every (m, c) pair
    panels = []
    for (ta, za), (tb, zb) in zip(curve.samples, curve.samples[1:]):
        tm = 0.5 * (ta + tb)
        zm = point_on_level(fe, fpe, tm, d_shift, 0.5 * (za + zb))
        nodes = tuple(
            (t, eval_jet(f, z, m_max), abs(fpe(z)), w)
            for t, z, w in ((ta, za, 1.0), (tm, zm, 4.0), (tb, zb, 1.0))
        )
        panels.append((tb - ta, nodes))

    # decay diagnostics on the exact last dyadic window [T/2, T]: uniform
    # composite-Simpson nodes refined onto the path, shared across (m, c)
    t_hi = ts[-1]
    t_lo = 0.5 * t_hi
    n_sub = 16
    diag_nodes = []
    for k in range(n_sub + 1):
        t = t_lo + (t_hi - t_lo) * k / n_sub
        i = min(bisect.bisect_left(ts, t), len(zs) - 1)
        z = point_on_level(fe, fpe, t, d_shift, zs[i])
        diag_nodes.append((t, eval_jet(f, z, m_max), abs(fpe(z))))

    tails = []
    for m in range(m_max + 1):
        for c in c_values:
            partial = 0.0
            for width, nodes in panels:
                contrib = 0.0
                for t, jet, speed, w in nodes:
                    contrib += w * math.exp(-c * log_abs_deriv(t, jet, m)) / speed
                partial += contrib * width / 6.0
            vals = [
                math.exp(-c * log_abs_deriv(t, jet, m)) / speed
                for t, jet, speed in diag_nodes
            ]
            h = (t_hi - t_lo) / n_sub
            w_last = (h / 3.0) * (
                vals[0]
                + vals[-1]
                + 4.0 * sum(vals[1:-1:2])
                + 2.0 * sum(vals[2:-1:2])
            )
            # for a tail ~ t^(-p) this equals the dyadic window ratio 2^(1-p)
            ratio = (vals[-1] * t_hi) / (vals[0] * t_lo) if vals[0] > 0 else math.inf
            finite = math.isfinite(partial) and ratio < 1.0
            bound = w_last * ratio / (1.0 - ratio) if finite else math.inf
            tails.append(TailIntegral(m, c, partial, ratio, bound, finite))

    growth_out = {m: tuple(points) for m, points in growth.items()}
    return RubelPathReport(
        f, d_shift, curve.samples, monotone, im_dev, growth_out, tuple(tails)
    )


# ---------------------------------------------------------------------------
# built-in tract demonstration for g(z) = exp(-z) + 1


@dataclass(frozen=True)
class TractRun:
    start: complex
    termination: str
    conclusive: bool
    t_est: float
    t_err: float
    im_drift: float
    times_to_radius: tuple  # (radius, time) pairs


@dataclass(frozen=True)
class TractDemoReport:
    g_text: str
    finite_run: TractRun
    infinite_run: TractRun


def demo_antiholo_tract(cfg: Optional[IntegratorConfig] = None) -> TractDemoReport:
    """Both escape regimes of the antiholomorphic flow of g(z) = exp(-z) + 1.

    From -1 + i*pi the flow runs along the invariant line Im z = pi into
    the left half-plane and escapes in finite time; from 1 it crawls
    through the right half-plane at speed between 1 and 2, so the time
    to radius R grows like R (infinite-time evidence).
    """
    from .expr import parse_expr

    cfg = cfg or IntegratorConfig()
    g = parse_expr("exp(-z) + 1")
    spec = FlowSpec(ANTIHOLOMORPHIC, g)

    z_fin = complex(-1.0, math.pi)
    traj_fin = integrate(spec, z_fin, cfg)
    est = blowup_time_estimate(traj_fin, cfg)
    term_fin = classify(traj_fin, cfg)
    inv_fin = antiholo_invariants(traj_fin)
    finite_run = TractRun(
        z_fin,
        term_fin.name,
        est.conclusive,
        est.t_est,
        est.t_err,
        inv_fin.im_drift,
        tuple((r, t) for r, t in est.exit_times),
    )

    z_inf = complex(1.0, 0.0)
    times = []
    drift = 0.0
    last_term = "TimeBudgetExhausted"
    last_conclusive = False
    for radius in (10.0, 100.0, 1000.0):
        cfg_r = replace(cfg, escape_radius=radius, t_max=max(cfg.t_max, 3.0 * radius))
        traj = integrate(spec, z_inf, cfg_r)
        times.append((radius, traj.t_end))
        term = classify(traj, cfg_r)
        est_r = blowup_time_estimate(traj, cfg_r)
        last_term = term.name
        last_conclusive = est_r.conclusive
        drift = max(drift, antiholo_invariants(traj).im_drift)
    infinite_run = TractRun(
        z_inf,
        last_term,
        last_conclusive,
        math.nan,
        math.nan,
        drift,
        tuple(times),
    )
    return TractDemoReport(to_text(g), finite_run, infinite_run)
