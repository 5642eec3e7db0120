"""Adaptive integration of plane flows driven by entire functions.

Two flow kinds share one integrator:

* holomorphic      dz/dt = f(z)
* antiholomorphic  dz/dt = conj(g(z))

The stepper is the Dormand-Prince 5(4) embedded pair.  Runge-Kutta
weights are real, so advancing the complex state is arithmetic
identical to advancing the real 2-vector (Re z, Im z); complex
arithmetic is used only inside the right-hand side.

Escape handling is deliberately two-tier.  Reaching the configured
radius is recorded as ReachedRadius; an actual finite blowup time is
only claimed by :func:`classify` / :func:`blowup_time_estimate`, either
from the w = 1/z chart (polynomials of degree >= 2, where the residual
transit time is a regular quadrature in the chart) or from geometric
extrapolation of exit times through dyadic radii.  When neither
applies, the negative result is reported as evidence, never proof.
"""

from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import EvaluationOverflow, PlaneflowError
from .expr import FuncExpr, antiderivative, compile_fn, is_constant, poly_coeffs
from .quadrature import adaptive_gauss

__all__ = [
    "ANTIHOLOMORPHIC",
    "AntiholoInvariants",
    "BlowupEstimate",
    "FORWARD",
    "FiniteTimeBlowup",
    "FixedPointApproach",
    "FlowSpec",
    "HOLOMORPHIC",
    "IntegratorConfig",
    "OdeResult",
    "Periodic",
    "REVERSED",
    "ReachedRadius",
    "StepUnderflow",
    "Termination",
    "TimeBudgetExhausted",
    "Trajectory",
    "antiholo_invariants",
    "blowup_time_estimate",
    "classify",
    "conformal_clock_residual",
    "drive_field",
    "integrate",
    "sample_at",
]

HOLOMORPHIC = "holomorphic"
ANTIHOLOMORPHIC = "antiholomorphic"
FORWARD = "forward"
REVERSED = "reversed"

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class FlowSpec:
    """Which flow to integrate: the function, its role, and time direction."""

    kind: str
    func: FuncExpr
    time_direction: str = FORWARD

    def __post_init__(self):
        if self.kind not in (HOLOMORPHIC, ANTIHOLOMORPHIC):
            raise ValueError(f"unknown flow kind {self.kind!r}")
        if self.time_direction not in (FORWARD, REVERSED):
            raise ValueError(f"unknown time direction {self.time_direction!r}")
        if is_constant(self.func):
            raise ValueError("flow function must be nonconstant")


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    h_max: float = 1e6
    escape_radius: float = 10.0
    t_max: float = 100.0
    blowup_extrapolation_window: int = 4
    fixed_point_radius: float = 1e-3
    periodic_return_tol: float = 1e-6

    def __post_init__(self):
        for name in (
            "rel_tol",
            "abs_tol",
            "h_max",
            "escape_radius",
            "t_max",
            "fixed_point_radius",
            "periodic_return_tol",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.rel_tol < 1e-14:
            raise ValueError("rel_tol below 1e-14 is not resolvable in doubles")
        if self.blowup_extrapolation_window < 3:
            raise ValueError("blowup_extrapolation_window must be at least 3")


class Termination:
    """Base class for trajectory termination records."""

    @property
    def name(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class ReachedRadius(Termination):
    t_exit: float


@dataclass(frozen=True)
class FiniteTimeBlowup(Termination):
    t_est: float
    t_err: float


@dataclass(frozen=True)
class FixedPointApproach(Termination):
    z_star: complex


@dataclass(frozen=True)
class Periodic(Termination):
    period: float


@dataclass(frozen=True)
class TimeBudgetExhausted(Termination):
    pass


@dataclass(frozen=True)
class StepUnderflow(Termination):
    pass


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped samples of one flow line, immutable once built."""

    spec: FlowSpec
    z0: complex
    samples: tuple
    errors: tuple
    termination: Termination

    @property
    def t_end(self) -> float:
        return self.samples[-1][0]

    @property
    def z_end(self) -> complex:
        return self.samples[-1][1]

    def __len__(self) -> int:
        return len(self.samples)


def _rhs(spec: FlowSpec) -> Callable[[complex], complex]:
    f = compile_fn(spec.func)
    forward = spec.time_direction == FORWARD
    if spec.kind == HOLOMORPHIC:
        return f if forward else (lambda z: -f(z))
    if forward:
        return lambda z: f(z).conjugate()
    return lambda z: -f(z).conjugate()


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4) pair

_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168,
    -355 / 33,
    46732 / 5247,
    49 / 176,
    -5103 / 18656,
)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# difference between the 5th and the embedded 4th order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _dp_step(rhs, z, h, k1):
    k2 = rhs(z + h * (_A21 * k1))
    k3 = rhs(z + h * (_A31 * k1 + _A32 * k2))
    k4 = rhs(z + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
    k5 = rhs(z + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
    k6 = rhs(z + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
    z_new = z + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
    k7 = rhs(z_new)
    err = abs(h) * abs(
        _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
    )
    return z_new, err, k7


def _hermite(z0, d0, z1, d1, h, theta):
    t2 = theta * theta
    t3 = t2 * theta
    return (
        (2 * t3 - 3 * t2 + 1) * z0
        + (t3 - 2 * t2 + theta) * (h * d0)
        + (-2 * t3 + 3 * t2) * z1
        + (t3 - t2) * (h * d1)
    )


def _bisect_theta(fn, lo=0.0, hi=1.0, iters=60):
    """Bisect fn over [lo, hi] assuming fn(lo) < 0 <= fn(hi)."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fn(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return hi


class _ReturnDetector:
    """Online first-return test against the seed point's cross-section."""

    def __init__(self, z0, f0, rhs, tol):
        self.z0 = z0
        self.f0 = f0
        self.u = f0 / abs(f0)
        self.rhs = rhs
        self.tol = tol
        self.arm_dist = max(100.0 * tol, 1e-6 * (1.0 + abs(z0)))
        self.armed = False

    def _section(self, z):
        return ((z - self.z0) * self.u.conjugate()).real

    def check(self, t, za, ka, zb, kb, h):
        db = abs(zb - self.z0)
        if not self.armed:
            if db > self.arm_dist:
                self.armed = True
            return None
        sa, sb = self._section(za), self._section(zb)
        if not (sa < 0.0 <= sb):
            return None
        if min(abs(za - self.z0), db) > 4.0 * abs(zb - za) + 10.0 * self.tol:
            return None
        theta = _bisect_theta(lambda s: self._section(_hermite(za, ka, zb, kb, h, s)))
        zc = _hermite(za, ka, zb, kb, h, theta)
        if abs(zc - self.z0) > self.tol:
            return None
        fc = self.rhs(zc)
        denom = abs(fc) * abs(self.f0)
        if denom == 0 or (fc * self.f0.conjugate()).real / denom < 0.999:
            return None
        return t + theta * h, zc


@dataclass
class OdeResult:
    samples: list
    errors: list
    crossings: list  # (radius, t, z) for each requested mark
    status: str  # t_stop | radius | event | periodic | marks_done | underflow | overflow
    period: Optional[float] = None
    exception: Optional[BaseException] = None


def drive_field(
    rhs: Callable[[complex], complex],
    z0: complex,
    cfg: IntegratorConfig,
    *,
    t0: float = 0.0,
    t_stop: float,
    stop_radius: Optional[float] = None,
    marks=(),
    event: Optional[Callable[[complex], float]] = None,
    detector: Optional[_ReturnDetector] = None,
    max_steps: int = 2_000_000,
) -> OdeResult:
    """Advance dz/dt = rhs(z) adaptively until a stop condition.

    Stops at t_stop, at |z| >= stop_radius, when ``event`` changes sign
    from negative to nonnegative, when all radius ``marks`` have been
    crossed, or when the step size underflows the time resolution.
    Crossing points are refined on the cubic Hermite interpolant of the
    bracketing step.
    """
    t, z = t0, complex(z0)
    samples = [(t, z)]
    errors = [0.0]
    crossings = []
    marks = sorted(marks)
    mark_idx = 0
    while mark_idx < len(marks) and abs(z) >= marks[mark_idx]:
        mark_idx += 1

    k1 = rhs(z)
    e_prev = event(z) if event is not None else 0.0
    h = min(cfg.h_max, max(t_stop - t, 0.0) or 1.0, 0.01 * (1.0 + abs(z)) / max(abs(k1), 1e-12))
    h = max(h, 1e-300)
    steps = 0

    while True:
        if t >= t_stop:
            return OdeResult(samples, errors, crossings, "t_stop")
        if marks and mark_idx >= len(marks):
            return OdeResult(samples, errors, crossings, "marks_done")
        steps += 1
        if steps > max_steps:
            raise PlaneflowError(f"step budget exceeded ({max_steps} steps) at t={t!r}")
        h = min(h, cfg.h_max, t_stop - t)
        floor = 1000.0 * _EPS * abs(t)
        try:
            z_new, err, k7 = _dp_step(rhs, z, h, k1)
        except EvaluationOverflow as exc:
            h *= 0.1
            if h < max(floor, 1e-300):
                return OdeResult(samples, errors, crossings, "overflow", exception=exc)
            continue
        sc = cfg.abs_tol + cfg.rel_tol * max(abs(z), abs(z_new))
        if not math.isfinite(err):
            h *= 0.1
            if h < max(floor, 1e-300):
                return OdeResult(
                    samples,
                    errors,
                    crossings,
                    "overflow",
                    exception=EvaluationOverflow(None, at=z),
                )
            continue
        if err > sc:
            h *= max(0.1, 0.9 * (sc / err) ** 0.2)
            if h < floor:
                return OdeResult(samples, errors, crossings, "underflow")
            continue

        t_new = t + h
        if t_new == t:
            return OdeResult(samples, errors, crossings, "underflow")

        if stop_radius is not None and abs(z_new) >= stop_radius:
            theta = _bisect_theta(
                lambda s: abs(_hermite(z, k1, z_new, k7, h, s)) - stop_radius
            )
            tc = t + theta * h
            if tc <= t:
                tc = math.nextafter(t, math.inf)
            samples.append((tc, _hermite(z, k1, z_new, k7, h, theta)))
            errors.append(err)
            return OdeResult(samples, errors, crossings, "radius")

        while mark_idx < len(marks) and abs(z_new) >= marks[mark_idx]:
            r = marks[mark_idx]
            theta = _bisect_theta(lambda s: abs(_hermite(z, k1, z_new, k7, h, s)) - r)
            crossings.append((r, t + theta * h, _hermite(z, k1, z_new, k7, h, theta)))
            mark_idx += 1

        if event is not None:
            e_new = event(z_new)
            if e_prev < 0.0 <= e_new:
                theta = _bisect_theta(
                    lambda s: event(_hermite(z, k1, z_new, k7, h, s))
                )
                tc = t + theta * h
                if tc <= t:
                    tc = math.nextafter(t, math.inf)
                samples.append((tc, _hermite(z, k1, z_new, k7, h, theta)))
                errors.append(err)
                return OdeResult(samples, errors, crossings, "event")
            e_prev = e_new

        if detector is not None:
            hit = detector.check(t, z, k1, z_new, k7, h)
            if hit is not None:
                t_hit, z_hit = hit
                samples.append((t_hit, z_hit))
                errors.append(err)
                return OdeResult(samples, errors, crossings, "periodic", period=t_hit)

        t, z, k1 = t_new, z_new, k7
        samples.append((t, z))
        errors.append(err)
        h = min(cfg.h_max, h * (5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (sc / err) ** 0.2))))


# ---------------------------------------------------------------------------
# public operations


def integrate(spec: FlowSpec, z0: complex, cfg: Optional[IntegratorConfig] = None) -> Trajectory:
    """Integrate the flow from z0 until the first termination condition.

    A seed sitting on a zero of the driving function returns immediately
    as FixedPointApproach (the trajectory is constant).  Evaluation
    overflow inside the right-hand side propagates to the caller.
    """
    cfg = cfg or IntegratorConfig()
    z0 = complex(z0)
    rhs = _rhs(spec)
    f0 = rhs(z0)
    if abs(f0) <= 1e-15 * (1.0 + abs(z0)):
        return Trajectory(spec, z0, ((0.0, z0),), (0.0,), FixedPointApproach(z0))

    detector = _ReturnDetector(z0, f0, rhs, cfg.periodic_return_tol)
    res = drive_field(
        rhs,
        z0,
        cfg,
        t_stop=cfg.t_max,
        stop_radius=cfg.escape_radius,
        detector=detector,
    )
    if res.status == "overflow":
        raise res.exception

    if res.status == "radius":
        term: Termination = ReachedRadius(res.samples[-1][0])
    elif res.status == "periodic":
        term = Periodic(res.period)
    elif res.status == "underflow":
        term = StepUnderflow()
    else:  # t_stop
        fp = _fixed_point_from_tail(res.samples, rhs, cfg)
        term = fp if fp is not None else TimeBudgetExhausted()
    return Trajectory(spec, z0, tuple(res.samples), tuple(res.errors), term)


def _fixed_point_from_tail(samples, rhs, cfg) -> Optional[FixedPointApproach]:
    """FixedPointApproach when the driving function stayed numerically zero
    and the state barely drifted over the trailing stretch of the run."""
    t_end, z_end = samples[-1]
    span = t_end - samples[0][0]
    window_start = t_end - 0.05 * span
    tail = [s for s in samples[-64:] if s[0] >= window_start]
    if len(tail) < 2:
        tail = list(samples[-2:])
    for _, z in tail:
        if abs(rhs(z)) >= 1e-12 * (1.0 + abs(z)):
            return None
    drift = max(abs(z - z_end) for _, z in tail)
    if drift < cfg.fixed_point_radius:
        return FixedPointApproach(z_end)
    return None


def sample_at(traj: Trajectory, t: float) -> complex:
    """State at an arbitrary time inside the trajectory's span.

    Uses cubic Hermite interpolation on the bracketing accepted step,
    with end derivatives recomputed from the right-hand side.
    """
    samples = traj.samples
    if not samples[0][0] <= t <= samples[-1][0]:
        raise ValueError(f"t={t!r} outside trajectory span")
    lo, hi = 0, len(samples) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if samples[mid][0] <= t:
            lo = mid
        else:
            hi = mid
    ta, za = samples[lo]
    tb, zb = samples[hi]
    if t == ta:
        return za
    if t == tb:
        return zb
    rhs = _rhs(traj.spec)
    h = tb - ta
    return _hermite(za, rhs(za), zb, rhs(zb), h, (t - ta) / h)


# ---------------------------------------------------------------------------
# blowup-time estimation and classification


@dataclass(frozen=True)
class BlowupEstimate:
    """Finite-escape-time estimate with an explicit evidence flag.

    ``conclusive`` False means the exit-time series did not converge
    (infinite-time evidence); t_est / t_err are NaN in that case.
    """

    t_est: float
    t_err: float
    conclusive: bool
    method: str  # "w_chart" | "dyadic" | "time_resolution" | "none"
    exit_times: tuple
    note: str = ""

    def as_tuple(self):
        return self.t_est, self.t_err


def _inconclusive(note, exit_times=()):
    return BlowupEstimate(math.nan, math.nan, False, "none", tuple(exit_times), note)


def blowup_time_estimate(traj: Trajectory, cfg: Optional[IntegratorConfig] = None) -> BlowupEstimate:
    """Estimate the finite escape time of an escaping trajectory.

    Polynomial f of degree >= 2 (holomorphic kind): continue past the
    zero-free radius, switch to the w = 1/z chart and integrate the
    remaining transit dt = -dw / (w^2 f(1/w)) along the chart segment to
    w = 0; the imaginary part of that integral is a built-in consistency
    check since the true remaining time is real.  Otherwise: continue
    through dyadic radii R, 2R, 4R, ... and accept a finite limit only
    when the exit-time increments decay geometrically (ratio <= 0.75).
    """
    cfg = cfg or IntegratorConfig()
    if not isinstance(traj.termination, ReachedRadius):
        return _inconclusive("not an escape candidate")
    rhs = _rhs(traj.spec)
    if traj.spec.kind == HOLOMORPHIC:
        coeffs = poly_coeffs(traj.spec.func)
        if coeffs is not None and len(coeffs) >= 3:
            if traj.spec.time_direction == REVERSED:
                coeffs = [-c for c in coeffs]
            est = _poly_chart_estimate(rhs, coeffs, traj, cfg)
            if est is not None:
                return est
    return _dyadic_estimate(rhs, traj, cfg)


def _poly_chart_estimate(rhs, coeffs, traj, cfg) -> Optional[BlowupEstimate]:
    n = len(coeffs) - 1
    a_n = coeffs[-1]
    root_bound = 1.0 + max(abs(c / a_n) for c in coeffs[:-1])
    r_safe = 2.0 * root_bound
    t_far, z_far = traj.samples[-1]
    if abs(z_far) < r_safe:
        res = drive_field(rhs, z_far, cfg, t0=t_far, t_stop=t_far + cfg.t_max, stop_radius=r_safe)
        if res.status != "radius":
            return None
        t_far, z_far = res.samples[-1]
    w_far = 1.0 / z_far
    rev = coeffs[::-1]  # q(w) = w^2 f(1/w) / w^(2-n); q(0) = a_n

    def q(w):
        acc = 0j
        for c in rev[::-1]:
            acc = acc * w + c
        return acc

    def integrand(s):
        w = w_far * (1.0 - s)
        return w_far * w ** (n - 2) / q(w)

    t_rem = adaptive_gauss(integrand, 0.0, 1.0, tol=1e-14 * (1.0 + abs(w_far)))
    t_est = t_far + t_rem.real
    # the true remaining transit is real; an imaginary residue means the
    # chart ray is not homotopic to the trajectory tail (not a blowup)
    if t_rem.real <= 0 or abs(t_rem.imag) > max(1e-8 * (1.0 + abs(t_est)), 4.0 * _EPS * abs(t_far)):
        return None
    t_err = abs(t_rem.imag) + 1e-10 * (1.0 + abs(t_est))
    exit_times = ((abs(traj.z_end), traj.t_end),)
    return BlowupEstimate(t_est, t_err, True, "w_chart", exit_times)


def _dyadic_estimate(rhs, traj, cfg) -> BlowupEstimate:
    t_exit, z_exit = traj.samples[-1]
    r0 = abs(z_exit)
    window = cfg.blowup_extrapolation_window
    marks = [r0 * 2.0**k for k in range(1, window)]
    res = drive_field(rhs, z_exit, cfg, t0=t_exit, t_stop=t_exit + cfg.t_max, marks=marks)
    times = [(r0, t_exit)] + [(r, t) for r, t, _ in res.crossings]

    if len(times) < 3:
        # genuine blowups can exhaust the time resolution of doubles
        # before crossing the next dyadic radius
        if res.status == "underflow":
            t_end, z_end = res.samples[-1]
            speed = abs(rhs(z_end)) if cmath.isfinite(z_end) else math.inf
            if speed * max(_EPS * abs(t_end), sys.float_info.min) * 1e3 >= 1.0:
                t_err = 1e3 * _EPS * (1.0 + abs(t_end))
                return BlowupEstimate(t_end, t_err, True, "time_resolution", tuple(times))
        return _inconclusive("too few dyadic exit times", times)

    ts = [t for _, t in times]
    deltas = [b - a for a, b in zip(ts, ts[1:])]
    positive = [d for d in deltas if d > 0.0]
    if len(positive) < len(deltas):
        # trailing increments collapsed to zero: the exit times agree to
        # the last representable digit
        t_est = ts[-1]
        return BlowupEstimate(
            t_est,
            max(1e3 * _EPS * (1.0 + abs(t_est)), min(positive) if positive else 0.0),
            True,
            "time_resolution",
            tuple(times),
        )
    ratios = [b / a for a, b in zip(deltas, deltas[1:])]
    if not ratios or max(ratios) > 0.75:
        return _inconclusive("exit-time increments not geometrically decreasing", times)
    rho = ratios[-1]
    t_est = ts[-1] + deltas[-1] * rho / (1.0 - rho)
    if not math.isfinite(t_est):
        return _inconclusive("extrapolated limit not finite", times)
    if len(ratios) >= 2:
        rho_p = ratios[-2]
        t_prev = ts[-2] + deltas[-2] * rho_p / (1.0 - rho_p)
        t_err = abs(t_est - t_prev) + 4.0 * _EPS * (1.0 + abs(t_est))
    else:
        t_err = deltas[-1] * rho / (1.0 - rho) + 4.0 * _EPS * (1.0 + abs(t_est))
    return BlowupEstimate(t_est, t_err, True, "dyadic", tuple(times))


def classify(traj: Trajectory, cfg: Optional[IntegratorConfig] = None) -> Termination:
    """Refine a trajectory's termination.

    ReachedRadius upgrades to FiniteTimeBlowup exactly when the exit-time
    analysis of :func:`blowup_time_estimate` converges; periodic and
    fixed-point terminations are detected during integration and pass
    through unchanged.  Classification is total: it never raises for a
    well-formed trajectory.
    """
    cfg = cfg or IntegratorConfig()
    term = traj.termination
    if isinstance(term, ReachedRadius):
        try:
            est = blowup_time_estimate(traj, cfg)
        except PlaneflowError:
            return term
        if est.conclusive:
            return FiniteTimeBlowup(est.t_est, est.t_err)
    return term


# ---------------------------------------------------------------------------
# flow invariants


def conformal_clock_residual(traj: Trajectory, f: Optional[FuncExpr] = None, quad_tol: float = 1e-12) -> float:
    """Worst deviation of the quadrature clock from integration time.

    Along a holomorphic-flow trajectory the primitive of 1/f advances
    exactly like time, so the line integral of dz/f accumulated over the
    sampled path should reproduce t - t0.  Panels are straight chords
    between consecutive samples (1/f is analytic nearby, so chords are
    exact up to quadrature error).  A vanishing f inside a panel makes
    the clock meaningless; that is reported as an infinite residual.
    """
    if traj.spec.kind != HOLOMORPHIC:
        raise ValueError("conformal clock applies to holomorphic flows only")
    fe = compile_fn(f if f is not None else traj.spec.func)
    samples = traj.samples
    if len(samples) < 2:
        return 0.0
    sign = -1.0 if traj.spec.time_direction == REVERSED else 1.0
    t0 = samples[0][0]
    acc = 0j
    worst = 0.0
    for (ta, za), (tb, zb) in zip(samples, samples[1:]):
        dz = zb - za
        try:
            seg = adaptive_gauss(lambda s: 1.0 / fe(za + s * dz), 0.0, 1.0, tol=quad_tol)
        except ZeroDivisionError:
            return math.inf
        acc += seg * dz
        worst = max(worst, abs(acc - sign * (tb - t0)))
    return worst


@dataclass(frozen=True)
class AntiholoInvariants:
    im_drift: float
    monotone: bool
    speed_residual: float


def antiholo_invariants(traj: Trajectory, g: Optional[FuncExpr] = None) -> AntiholoInvariants:
    """Check the conserved quantities of an antiholomorphic run.

    Im G is constant along trajectories and Re G increases at speed
    |g|^2; the residual compares finite differences of Re G against the
    squared speed at the Hermite midpoint of each step.
    """
    if traj.spec.kind != ANTIHOLOMORPHIC:
        raise ValueError("antiholomorphic invariants need an antiholomorphic trajectory")
    g = g if g is not None else traj.spec.func
    big_g = antiderivative(g)
    ge = compile_fn(g)
    big_ge = compile_fn(big_g)
    sign = -1.0 if traj.spec.time_direction == REVERSED else 1.0
    samples = traj.samples
    vs = [big_ge(z) for _, z in samples]
    v0 = vs[0]
    im_drift = max(abs(v.imag - v0.imag) for v in vs)
    monotone = all(
        sign * (vb.real - va.real) > 0.0 for va, vb in zip(vs, vs[1:])
    )
    speed_residual = 0.0
    for (ta, za), (tb, zb), va, vb in zip(samples, samples[1:], vs, vs[1:]):
        dt = tb - ta
        if dt <= 0:
            continue
        da = sign * ge(za).conjugate()
        db = sign * ge(zb).conjugate()
        z_mid = _hermite(za, da, zb, db, dt, 0.5)
        speed_residual = max(
            speed_residual, abs(sign * (vb.real - va.real) / dt - abs(ge(z_mid)) ** 2)
        )
    return AntiholoInvariants(im_drift, monotone, speed_residual)
