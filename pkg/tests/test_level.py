import math

import pytest

from planeflow.expr import parse_expr
from planeflow.flow import IntegratorConfig
from planeflow.level import (
    LevelCurve,
    infinite_time_criterion,
    trace_level,
    transit_time,
)


class TestTrace:
    def test_parabola_curve_is_positive_real_axis(self):
        # G = z^2/2 from 1: z(X) = sqrt(2X), so X=50 lands on z=10
        curve = trace_level(parse_expr("z^2 / 2"), 1.0, 50.0, IntegratorConfig(escape_radius=100.0))
        assert curve.stop_reason == "target"
        assert abs(curve.z_end - 10.0) <= 1e-6
        for x, z in curve.samples:
            assert abs(z - math.sqrt(2.0 * x)) <= 1e-8 * (1 + abs(z))

    def test_cubic_curve_endpoint(self):
        curve = trace_level(parse_expr("z^3 / 3"), 1.0, 1000.0 / 3.0, IntegratorConfig(escape_radius=100.0))
        assert abs(curve.z_end - 10.0) <= 1e-6

    def test_imaginary_branch_stops_at_critical_point(self):
        # from i the level set of Im(z^2/2) = 0 runs down the imaginary
        # axis into the critical point at 0
        curve = trace_level(parse_expr("z^2 / 2"), 1j, 0.0)
        assert curve.stop_reason == "critical_point"
        assert abs(curve.z_end) <= 1e-6

    def test_level_is_held(self):
        curve = trace_level(parse_expr("z^2 / 2"), 1 + 1j, 60.0, IntegratorConfig(escape_radius=100.0))
        fn = lambda z: (z * z / 2.0).imag
        for x, z in curve.samples:
            # corrector tolerance is 1e-12 of the running target scale
            assert abs(fn(z) - curve.beta) <= 10.0 * 1e-12 * (1.0 + abs(x) + abs(curve.beta))

    def test_x_strictly_increasing(self):
        curve = trace_level(parse_expr("z^3 / 3"), 1.0, 500.0, IntegratorConfig(escape_radius=100.0))
        assert all(b > a for a, b in zip(curve.xs, curve.xs[1:]))

    def test_retrace_with_halved_steps(self):
        cfg = IntegratorConfig(escape_radius=100.0)
        a = trace_level(parse_expr("z^2 / 2"), 1 + 1j, 60.0, cfg)
        b = trace_level(parse_expr("z^2 / 2"), 1 + 1j, 60.0, cfg, step_scale=0.05)
        assert abs(a.z_end - b.z_end) <= 1e-5 * (1.0 + abs(a.z_end))

    def test_start_at_critical_point_rejected(self):
        with pytest.raises(ValueError):
            trace_level(parse_expr("z^2 / 2"), 0.0, 1.0)

    def test_backward_target_rejected(self):
        with pytest.raises(ValueError):
            trace_level(parse_expr("z^2 / 2"), 1.0, 0.2)

    def test_radius_stop(self):
        curve = trace_level(parse_expr("z^2 / 2"), 1.0, 1e9, IntegratorConfig(escape_radius=50.0))
        assert curve.stop_reason == "radius"
        assert abs(curve.z_end) > 50.0


class TestTransit:
    def test_parabola_log_transit(self):
        # |g|^2 = 2X on the curve, so the transit is (1/2) ln(X2/X1)
        cfg = IntegratorConfig(escape_radius=100.0)
        curve = trace_level(parse_expr("z^2 / 2"), 1.0, 50.0, cfg)
        rep = transit_time(curve, cfg)
        want = 0.5 * math.log(50.0 / 0.5)
        assert abs(rep.quadrature_time - want) <= 1e-5
        assert rep.relative_gap <= 1e-3

    def test_cubic_transit_approaches_one(self):
        cfg = IntegratorConfig(escape_radius=1e7, t_max=10.0)
        curve = trace_level(parse_expr("z^3 / 3"), 1.0, 1e18 / 3.0, cfg)
        rep = transit_time(curve, cfg)
        radius = (3.0 * curve.x_end) ** (1.0 / 3.0)
        assert abs(rep.quadrature_time - (1.0 - 1.0 / radius)) <= 1e-6
        assert rep.relative_gap <= 1e-3

    def test_degenerate_single_point(self):
        curve = trace_level(parse_expr("z^2 / 2"), 1.0, 50.0)
        stub = LevelCurve(curve.big_g, curve.beta, curve.xs[:1], curve.zs[:1], "target")
        rep = transit_time(stub)
        assert rep.quadrature_time == 0.0
        assert rep.relative_gap == 0.0

    def test_divergence_flag_near_interior_critical_point(self):
        # synthetic curve whose X-range walks through the critical value
        # of G = z^2/2 at 0: the 1/|g|^2 integrand has a c/X singularity
        big_g = parse_expr("z^2 / 2")
        xs, zs = [], []
        for x in (-0.5, -0.3, -0.1, 0.1, 0.3, 0.5):
            if x < 0:
                zs.append(1j * math.sqrt(-2.0 * x))
            else:
                zs.append(complex(math.sqrt(2.0 * x), 0.0))
            xs.append(x)
        curve = LevelCurve(big_g, 0.0, tuple(xs), tuple(zs), "target")
        rep = transit_time(curve)
        assert rep.quadrature_time == math.inf
        assert rep.divergence_witness is not None
        assert abs(rep.divergence_witness) < 0.5


class TestCriterion:
    def test_fires_for_linear_potential(self):
        cfg = IntegratorConfig(escape_radius=1e4)
        curve = trace_level(parse_expr("z"), 1.0, 700.0, cfg)
        rep = infinite_time_criterion(curve)
        assert rep.conclusive and rep.fires
        assert rep.witnesses
        # the witnesses are |G|/|z|^2 = 1/|z| along the real axis
        for z, ratio in rep.witnesses:
            assert abs(ratio - 1.0 / abs(z)) <= 1e-6

    def test_constant_ratio_does_not_fire(self):
        cfg = IntegratorConfig(escape_radius=1e4)
        curve = trace_level(parse_expr("z^2 / 2"), 1.0, 2e5, cfg)
        rep = infinite_time_criterion(curve)
        assert rep.conclusive and not rep.fires
        for _, ratio in rep.witnesses:
            assert abs(ratio - 0.5) <= 1e-6

    def test_growing_ratio_does_not_fire(self):
        cfg = IntegratorConfig(escape_radius=1e4)
        curve = trace_level(parse_expr("z^3 / 3"), 1.0, 601.0**3 / 3.0, cfg)
        rep = infinite_time_criterion(curve)
        assert rep.conclusive and not rep.fires

    def test_short_curve_inconclusive(self):
        curve = trace_level(parse_expr("z"), 1.0, 5.0)
        rep = infinite_time_criterion(curve)
        assert not rep.conclusive and not rep.fires

    def test_fired_curve_has_unbounded_transit_times(self):
        # when the slow-growth test fires, flow times to dyadic radii
        # keep growing with no geometric decay of the increments
        cfg = IntegratorConfig(escape_radius=1e4)
        full = trace_level(parse_expr("z"), 1.0, 700.0, cfg)
        assert infinite_time_criterion(full).fires
        times = []
        for radius in (2.0, 4.0, 8.0, 16.0, 32.0, 64.0):
            idx = next(i for i, z in enumerate(full.zs) if abs(z) >= radius)
            sub = LevelCurve(full.big_g, full.beta, full.xs[: idx + 1], full.zs[: idx + 1], "target")
            times.append(transit_time(sub, cfg).ode_time)
        assert all(b > a for a, b in zip(times, times[1:]))
        deltas = [b - a for a, b in zip(times, times[1:])]
        assert all(b / a > 0.75 for a, b in zip(deltas, deltas[1:]))
