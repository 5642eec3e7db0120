"""Level curves of Im G and transit times along them.

An antiholomorphic trajectory is a level curve of Im G traversed with
X = Re G increasing, so X itself is the natural curve parameter: the
predictor follows dz/dX = 1/g(z) (g = G') and a Newton corrector pins
G(z) back to X + i*beta after every step.  Parametrizing by X makes the
transit time a one-dimensional integral of 1/|g|^2 over [X1, X2], which
is computed by adaptive Simpson with corrector-refined evaluation
points and cross-checked against direct integration of the flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import CorrectorDivergence, EvaluationOverflow
from .expr import FuncExpr, compile_fn, derivative
from .flow import IntegratorConfig, drive_field
from .quadrature import QuadratureDiverged, adaptive_simpson

__all__ = [
    "CriterionReport",
    "LevelCurve",
    "TransitReport",
    "infinite_time_criterion",
    "trace_level",
    "transit_time",
]

_G_MIN = 1e-8  # tracing stops here: critical points are infinitely far in time


@dataclass(frozen=True)
class LevelCurve:
    """Ordered samples of {Im G = beta} with strictly increasing Re G."""

    big_g: FuncExpr
    beta: float
    xs: tuple
    zs: tuple
    stop_reason: str  # "target" | "critical_point" | "radius"

    @property
    def samples(self):
        return tuple(zip(self.xs, self.zs))

    @property
    def x_start(self) -> float:
        return self.xs[0]

    @property
    def x_end(self) -> float:
        return self.xs[-1]

    @property
    def z_end(self) -> complex:
        return self.zs[-1]

    def __len__(self) -> int:
        return len(self.xs)


def _corrector(big_ge, ge, target, z_guess, tol, g_min=_G_MIN, max_iter=8):
    """Newton solve G(z) = target from z_guess; returns (z, iterations) or None."""
    z = z_guess
    for it in range(max_iter):
        try:
            v = big_ge(z)
        except EvaluationOverflow:
            return None
        if abs(v - target) <= tol:
            return z, it
        g = ge(z)
        if abs(g) < g_min:
            return None
        z = z - (v - target) / g
    try:
        v = big_ge(z)
    except EvaluationOverflow:
        return None
    if abs(v - target) <= tol:
        return z, max_iter
    return None


def point_on_level(big_ge, ge, x, beta, z_guess, tol_scale=1e-12):
    """Corrector-refined curve point at Re G = x (shared by the quadratures)."""
    target = complex(x, beta)
    tol = tol_scale * (1.0 + abs(target))
    got = _corrector(big_ge, ge, target, z_guess, tol, max_iter=12)
    if got is None:
        raise CorrectorDivergence("level-curve corrector diverged", z_guess)
    return got[0]


def trace_level(
    big_g: FuncExpr,
    z_start: complex,
    x_target: float,
    cfg: Optional[IntegratorConfig] = None,
    *,
    step_scale: float = 0.1,
    g_min: float = _G_MIN,
) -> LevelCurve:
    """Trace {Im G = Im G(z_start)} from z_start toward larger Re G.

    Stops at x_target, when |z| leaves the configured radius, or when
    |g| < g_min (approaching a critical point of G, which the flow
    cannot reach in finite time anyway).  ``step_scale`` bounds the
    spatial step to step_scale*(1+|z|); halving it retraces the same
    curve with finer sampling.
    """
    cfg = cfg or IntegratorConfig()
    big_ge = compile_fn(big_g)
    ge = compile_fn(derivative(big_g))
    z = complex(z_start)
    v0 = big_ge(z)
    beta = v0.imag
    x = v0.real
    if x_target <= x:
        raise ValueError("x_target must exceed Re G at the start point")
    g = ge(z)
    if abs(g) < g_min:
        raise ValueError("start point lies at a critical point of G")

    xs = [x]
    zs = [z]
    stop = "target"
    dx = step_scale * (1.0 + abs(z)) * abs(g)
    fails = 0
    steps = 0
    while x < x_target:
        steps += 1
        if steps > 200_000:
            raise CorrectorDivergence("level tracing did not finish", z)
        dx = min(dx, x_target - x)
        if x + dx == x:
            break  # remaining span below double resolution at this X
        step = _pc_step(big_ge, ge, z, x, dx, beta, g_min)
        if step is None:
            fails += 1
            dx *= 0.5
            if fails > 60:
                # a persistent failure with g collapsing is the curve
                # running into a critical point, not a tracer defect
                if abs(ge(z)) < 1e3 * g_min:
                    stop = "critical_point"
                    break
                raise CorrectorDivergence("level tracing stalled", z)
            continue
        fails = 0
        z, iters = step
        x = x + dx
        xs.append(x)
        zs.append(z)
        g = ge(z)
        if abs(g) < g_min:
            stop = "critical_point"
            break
        if abs(z) > cfg.escape_radius:
            stop = "radius"
            break
        cap = step_scale * (1.0 + abs(z)) * abs(g)
        dx = min(dx * (1.6 if iters <= 3 else 1.0), cap)
    return LevelCurve(big_g, beta, tuple(xs), tuple(zs), stop)


def _pc_step(big_ge, ge, z, x, dx, beta, g_min):
    target = complex(x + dx, beta)
    try:
        g0 = ge(z)
        if abs(g0) < g_min:
            return None
        z_half = z + 0.5 * dx / g0
        g_half = ge(z_half)
        if abs(g_half) < g_min:
            return None
        z_pred = z + dx / g_half
    except EvaluationOverflow:
        return None
    # tolerance scales with the step so points near a critical value of G
    # (|target| tiny) are still resolved to full relative precision
    tol = 1e-12 * (abs(target) + dx)
    got = _corrector(big_ge, ge, target, z_pred, tol, g_min)
    if got is None:
        return None
    return got


@dataclass(frozen=True)
class TransitReport:
    """Transit time over an X-range, by quadrature and by direct flow."""

    x_range: tuple
    quadrature_time: float  # math.inf when the integrand diverges
    ode_time: float
    relative_gap: float
    divergence_witness: Optional[float] = None


class _IntegrandDiverged(Exception):
    def __init__(self, x):
        self.x = x


def transit_time(
    curve: LevelCurve,
    cfg: Optional[IntegratorConfig] = None,
    *,
    quad_rel_tol: float = 1e-7,
    g_min: float = _G_MIN,
) -> TransitReport:
    """Compare the level-curve transit integral with direct integration.

    quadrature_time integrates 1/|g(z(X))|^2 over the curve's X-range,
    refining midpoints back onto the curve with the Newton corrector.
    ode_time integrates dz/dt = conj(g(z)) from the curve start until
    Re G reaches the far end.  When the integrand grows like c/X near an
    interior point (a zero of g on or next to the curve) the quadrature
    reports +inf with a witness abscissa instead of a number.
    """
    cfg = cfg or IntegratorConfig()
    x1, x2 = curve.xs[0], curve.xs[-1]
    if x2 <= x1:
        return TransitReport((x1, x2), 0.0, 0.0, 0.0)
    big_ge = compile_fn(curve.big_g)
    ge = compile_fn(derivative(curve.big_g))
    beta = curve.beta

    def speed_inv(x, za, zb, xa, xb):
        frac = (x - xa) / (xb - xa)
        guess = za + frac * (zb - za)
        try:
            z = point_on_level(big_ge, ge, x, beta, guess)
        except CorrectorDivergence:
            # the corrector cannot pin the curve here: a critical value
            # of G sits inside the X-range
            raise _IntegrandDiverged(x) from None
        g = ge(z)
        if abs(g) < g_min:
            raise _IntegrandDiverged(x)
        return 1.0 / (abs(g) * abs(g))

    witness = None
    quad = 0.0
    try:
        rough = 0.0
        panels = list(zip(curve.samples, curve.samples[1:]))
        for (xa, za), (xb, zb) in panels:
            fa = speed_inv(xa, za, zb, xa, xb)
            fb = speed_inv(xb, za, zb, xa, xb)
            rough += 0.5 * (fa + fb) * (xb - xa)
        floor = rough / max(len(panels), 1)
        for (xa, za), (xb, zb) in panels:
            est = 0.5 * (speed_inv(xa, za, zb, xa, xb) + speed_inv(xb, za, zb, xa, xb)) * (xb - xa)
            tol = quad_rel_tol * (est + floor + 1e-300)
            quad += adaptive_simpson(
                lambda x: speed_inv(x, za, zb, xa, xb), xa, xb, tol
            )
    except _IntegrandDiverged as exc:
        quad = math.inf
        witness = exc.x
    except QuadratureDiverged as exc:
        quad = math.inf
        witness = exc.witness

    rhs = lambda z: ge(z).conjugate()
    t_budget = cfg.t_max if not math.isfinite(quad) else max(1.0, 4.0 * quad)
    res = drive_field(
        rhs,
        curve.zs[0],
        cfg,
        t_stop=t_budget,
        event=lambda z: big_ge(z).real - x2,
    )
    ode = res.samples[-1][0] if res.status == "event" else math.inf
    if math.isfinite(quad) and math.isfinite(ode):
        gap = abs(quad - ode) / max(abs(ode), 1e-12)
    else:
        gap = math.inf
    return TransitReport((x1, x2), quad, ode, gap, witness)


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of the slow-growth sufficient test for infinite transit."""

    fires: bool
    conclusive: bool
    witnesses: tuple  # (z, |G(z)|/|z|^2) at dyadic radii
    note: str = ""


def infinite_time_criterion(
    curve: LevelCurve,
    *,
    ratio_threshold: float = 0.01,
    run_length: int = 3,
) -> CriterionReport:
    """Sufficient (not necessary) test that the transit to infinity is infinite.

    Samples the curve at dyadic radii and fires when |G(z)|/|z|^2 drops
    below ``ratio_threshold`` and keeps strictly decreasing across at
    least ``run_length`` consecutive radii.  The threshold is calibrated
    so that a constant ratio (quadratic growth of G) never fires.
    """
    r_head = abs(curve.zs[0])
    r_tail = abs(curve.zs[-1])
    if r_tail < 10.0 * max(r_head, 1e-12):
        return CriterionReport(False, False, (), "curve too short: |z| must grow tenfold")
    witnesses = []
    radius = max(r_head, 1e-12)
    idx = 0
    n = len(curve.zs)
    while radius <= r_tail:
        while idx < n and abs(curve.zs[idx]) < radius:
            idx += 1
        if idx >= n:
            break
        z = curve.zs[idx]
        ratio = math.hypot(curve.xs[idx], curve.beta) / (abs(z) * abs(z))
        witnesses.append((z, ratio))
        radius *= 2.0
    fires = False
    ratios = [w[1] for w in witnesses]
    for j in range(len(ratios) - run_length + 1):
        window = ratios[j : j + run_length]
        if all(r < ratio_threshold for r in window) and all(
            a > b for a, b in zip(window, window[1:])
        ):
            fires = True
            break
    return CriterionReport(fires, True, tuple(witnesses))
