import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from frictiondisc import (
    BLOWUP,
    CROSSING,
    ContactMode,
    ESCAPING,
    IntegratorOptions,
    SINGULARITY_HIT,
    SLIDING,
    SLIDING_EXIT,
    SURFACE_HIT,
    TIME_LIMIT,
    TWO_FOLD,
    TwoFoldProximityError,
    classify,
    friction_decomposition,
    integrate,
    lambda_star,
    lateral_velocity,
    lateral_velocity_gradient,
    normal_rate,
    slip_field,
    sliding_field,
    vector_field,
)


def on_sigma(r, w, p):
    cot_g = math.cos(p.gamma) / math.sin(p.gamma)
    return np.array([r, (w - p.omega0) * (p.d - r * cot_g), w])


def sample_surface(p, rng, n, r_range=(0.02, 0.5), w_range=(-1.6, -0.5)):
    for _ in range(n):
        yield on_sigma(rng.uniform(*r_range), rng.uniform(*w_range), p)


class TestClassify:
    def test_sign_pattern_matches_direct_evaluation(self, params):
        rng = np.random.default_rng(10)
        seen = set()
        for x in sample_surface(params, rng, 300):
            n_plus = normal_rate(x, +params.mu, params)
            n_minus = normal_rate(x, -params.mu, params)
            region = classify(x, params)
            seen.add(region.tag)
            if n_plus < 0 < n_minus:
                assert region.tag == SLIDING
            elif n_minus < 0 < n_plus:
                assert region.tag == ESCAPING
            elif n_plus * n_minus > 0:
                assert region.tag == CROSSING
        assert {SLIDING, ESCAPING, CROSSING} <= seen

    def test_lambda_star_value(self, params):
        rng = np.random.default_rng(11)
        for x in sample_surface(params, rng, 50):
            region = classify(x, params)
            if region.tag == TWO_FOLD:
                continue
            f0, fdir = friction_decomposition(x, params)
            hx = lateral_velocity_gradient(x, params)
            assert region.lambda_star == pytest.approx(-(hx @ f0) / (hx @ fdir), rel=1e-12)

    def test_zero_numerator_point(self, params):
        # solve for omega with vanishing friction-free normal velocity at fixed r
        r = 0.25
        f = lambda w: normal_rate(on_sigma(r, w, params), 0.0, params)
        w0 = brentq(f, -1.6, -0.5)
        x = on_sigma(r, w0, params)
        region = classify(x, params)
        assert region.lambda_star == pytest.approx(0.0, abs=1e-12)
        assert region.tag in (SLIDING, ESCAPING)

    def test_two_fold_detected(self, design):
        region = classify(design.x_star, design.params)
        assert region.tag == TWO_FOLD
        assert region.lambda_star is None

    def test_off_surface_rejected(self, params):
        with pytest.raises(ValueError, match="off the switching surface"):
            classify((0.2, 1.0, -1.0), params)


class TestSlidingField:
    def test_tangency(self, params):
        rng = np.random.default_rng(12)
        count = 0
        for x in sample_surface(params, rng, 200):
            if classify(x, params).tag != SLIDING:
                continue
            ds = sliding_field(x, params)
            hx = lateral_velocity_gradient(x, params)
            scale = np.linalg.norm(hx) * np.linalg.norm(ds)
            assert abs(hx @ ds) <= 1e-12 * max(1.0, scale)
            count += 1
        assert count > 10

    def test_equals_stick_mode_at_lambda_star(self, params):
        rng = np.random.default_rng(13)
        for x in sample_surface(params, rng, 100):
            region = classify(x, params)
            if region.tag != SLIDING:
                continue
            np.testing.assert_allclose(
                sliding_field(x, params),
                vector_field(x, ContactMode.stick(region.lambda_star), params),
                rtol=1e-12, atol=1e-15,
            )

    def test_rescaled_form_identity(self, params):
        # b * f_s = b * f0 - a * f_dir: the scaled surface flow
        rng = np.random.default_rng(14)
        for x in sample_surface(params, rng, 100):
            if classify(x, params).tag not in (SLIDING, ESCAPING):
                continue
            f0, fdir = friction_decomposition(x, params)
            hx = lateral_velocity_gradient(x, params)
            a, b = float(hx @ f0), float(hx @ fdir)
            np.testing.assert_allclose(
                b * sliding_field(x, params), b * f0 - a * fdir, rtol=1e-10, atol=1e-14
            )

    def test_zero_numerator_gives_free_field(self, params):
        r = 0.25
        f = lambda w: normal_rate(on_sigma(r, w, params), 0.0, params)
        w0 = brentq(f, -1.6, -0.5)
        x = on_sigma(r, w0, params)
        f0, _ = friction_decomposition(x, params)
        np.testing.assert_allclose(sliding_field(x, params), f0, rtol=1e-9, atol=1e-12)

    def test_two_fold_proximity_raises(self, design):
        with pytest.raises(TwoFoldProximityError) as err:
            sliding_field(design.x_star, design.params)
        assert err.value.state.r == pytest.approx(design.x_star.r)


class TestIntegrate:
    def test_single_segment_time_limit(self, params):
        s0 = np.array([0.4, 0.3, -0.8])
        assert lateral_velocity(s0, params) > 0.1
        segs = integrate(s0, ContactMode.slip_positive(), params,
                         IntegratorOptions(t_max=1e-3))
        assert len(segs) == 1
        assert segs[0].terminal.tag == TIME_LIMIT
        assert segs[0].mode.tag == "slip+"

    def test_case1_stick_reaches_two_fold(self, design):
        p = design.params
        x0 = on_sigma(design.x_star.r + 0.012, design.x_star.omega - 0.015, p)
        assert classify(x0, p).tag == SLIDING
        segs = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p,
                         IntegratorOptions(t_max=50.0))
        assert segs[-1].terminal.tag == SINGULARITY_HIT
        end = segs[-1].terminal.state.as_array()
        assert np.linalg.norm(end - design.x_star.as_array()) < 1e-5

    def test_crossing_produces_matching_segments(self, params):
        # start above the surface over a crossing region and watch the flip
        x_on = on_sigma(0.45, -1.3, params)
        assert classify(x_on, params).tag == CROSSING
        x0 = x_on + np.array([0.0, 0.01, 0.0])
        side = 1 if lateral_velocity(x0, params) > 0 else -1
        mode = ContactMode.slip_positive() if side > 0 else ContactMode.slip_negative()
        segs = integrate(x0, mode, params, IntegratorOptions(t_max=5.0, max_events=4))
        assert len(segs) >= 2
        first, second = segs[0], segs[1]
        assert first.terminal.tag == SURFACE_HIT
        assert first.terminal.detail["classification"] == CROSSING
        assert {first.mode.tag, second.mode.tag} == {"slip+", "slip-"}
        np.testing.assert_allclose(first.states[-1], second.states[0], atol=1e-12)

    def test_crossing_consistency(self, params):
        # both one-sided normal velocities share a sign at every crossing event
        x_on = on_sigma(0.45, -1.3, params)
        x0 = x_on + np.array([0.0, 0.01, 0.0])
        mode = (ContactMode.slip_positive() if lateral_velocity(x0, params) > 0
                else ContactMode.slip_negative())
        segs = integrate(x0, mode, params, IntegratorOptions(t_max=5.0, max_events=10))
        n_checked = 0
        for seg in segs:
            ev = seg.terminal
            if ev.tag == SURFACE_HIT and ev.detail.get("classification") == CROSSING:
                x = ev.state.as_array()
                np_ = normal_rate(x, +params.mu, params)
                nm = normal_rate(x, -params.mu, params)
                assert np.sign(np_) == np.sign(nm)
                n_checked += 1
        assert n_checked >= 1

    def test_event_localization(self, params):
        x_on = on_sigma(0.45, -1.3, params)
        x0 = x_on + np.array([0.0, 0.01, 0.0])
        mode = (ContactMode.slip_positive() if lateral_velocity(x0, params) > 0
                else ContactMode.slip_negative())
        segs = integrate(x0, mode, params, IntegratorOptions(t_max=5.0, max_events=10))
        scale = max(1.0, max(float(np.max(np.abs(s.states))) for s in segs))
        for seg in segs:
            if seg.terminal.tag == SURFACE_HIT:
                h = lateral_velocity(seg.terminal.state, params)
                assert abs(h) <= 1e-10 * scale

    def test_stick_integrity_random_points(self, design):
        # acceptance-style property: surface drift and force bounds along sticks
        p = design.params
        rng = np.random.default_rng(15)
        n_done = 0
        while n_done < 10:
            dr = rng.uniform(0.003, 0.03)
            dw = rng.uniform(-0.03, -0.003)
            x0 = on_sigma(design.x_star.r + dr, design.x_star.omega + dw, p)
            if classify(x0, p).tag != SLIDING:
                continue
            segs = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p,
                             IntegratorOptions(t_max=40.0))
            stick = [s for s in segs if s.mode.tag == "stick"]
            assert stick
            for seg in stick:
                hs = np.array([lateral_velocity(x, p) for x in seg.states])
                assert np.max(np.abs(hs)) <= 1e-8
                lams = seg.lambdas[np.isfinite(seg.lambdas)]
                assert np.all(lams >= -p.mu - 1e-9)
                assert np.all(lams <= p.mu + 1e-9)
            n_done += 1

    def test_sliding_exit_force_at_bound(self, design):
        # escaping-region sticks leave through the static bound
        p = design.params
        rng = np.random.default_rng(16)
        exits = []
        for _ in range(200):
            x0 = on_sigma(design.x_star.r - rng.uniform(0.005, 0.05),
                          design.x_star.omega + rng.uniform(-0.02, 0.02), p)
            if classify(x0, p).tag != ESCAPING:
                continue
            segs = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p,
                             IntegratorOptions(t_max=20.0, allow_escaping_stick=True,
                                               max_events=6))
            exits += [s.terminal for s in segs if s.terminal.tag == SLIDING_EXIT]
            if len(exits) >= 3:
                break
        assert len(exits) >= 3
        for ev in exits:
            lam = lambda_star(ev.state, p)
            assert abs(abs(lam) - p.mu) <= 1e-8

    def test_escaping_stick_requires_flag(self, design):
        p = design.params
        x0 = on_sigma(design.x_star.r - 0.02, design.x_star.omega, p)
        assert classify(x0, p).tag == ESCAPING
        with pytest.raises(ValueError, match="escaping"):
            integrate(x0, ContactMode.stick(0.0), p, IntegratorOptions(t_max=1.0))

    def test_stick_start_off_surface_rejected(self, params):
        with pytest.raises(ValueError, match="surface"):
            integrate((0.2, 1.0, -1.0), ContactMode.stick(0.0), params, IntegratorOptions())

    def test_stick_start_at_crossing_rejected(self, params):
        x0 = on_sigma(0.45, -1.3, params)
        assert classify(x0, params).tag == CROSSING
        with pytest.raises(ValueError, match="crossing"):
            integrate(x0, ContactMode.stick(0.0), params, IntegratorOptions())

    def test_determinism(self, design):
        p = design.params
        x0 = on_sigma(design.x_star.r + 0.012, design.x_star.omega - 0.015, p)
        opts = IntegratorOptions(t_max=50.0)
        a = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p, opts)
        b = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p, opts)
        assert len(a) == len(b)
        for sa, sb in zip(a, b):
            assert sa.terminal.tag == sb.terminal.tag
            assert sa.terminal.time == sb.terminal.time
            np.testing.assert_array_equal(sa.times, sb.times)
            np.testing.assert_array_equal(sa.states, sb.states)

    def test_reversal_consistency(self, params):
        # integrate the post-crossing segment backward with an independent
        # integrator; it must recover the crossing point
        x_on = on_sigma(0.45, -1.3, params)
        x0 = x_on + np.array([0.0, 0.01, 0.0])
        mode = (ContactMode.slip_positive() if lateral_velocity(x0, params) > 0
                else ContactMode.slip_negative())
        segs = integrate(x0, mode, params, IntegratorOptions(t_max=5.0, max_events=3))
        assert segs[0].terminal.detail.get("classification") == CROSSING
        second = segs[1]
        side = 1 if second.mode.tag == "slip+" else -1
        t_cross = second.times[0]
        k = min(40, len(second.times) - 1)
        t_end, x_end = second.times[k], second.states[k]
        sol = solve_ivp(lambda t, y: slip_field(y, side, params), (t_end, t_cross), x_end,
                        rtol=1e-11, atol=1e-13, dense_output=True)
        back = sol.y[:, -1]
        assert np.linalg.norm(back - second.states[0]) <= 1e-6

    def test_blowup_event(self, params):
        s0 = np.array([5.0, 50.0, 5.0])
        mode = (ContactMode.slip_positive() if lateral_velocity(s0, params) > 0
                else ContactMode.slip_negative())
        segs = integrate(s0, mode, params,
                         IntegratorOptions(t_max=100.0, blowup_bound=100.0))
        assert segs[-1].terminal.tag == BLOWUP

    def test_non_finite_start(self, params):
        segs = integrate(np.array([np.nan, 0.0, 0.0]), ContactMode.slip_positive(), params,
                         IntegratorOptions())
        assert segs[-1].terminal.tag == BLOWUP

    def test_times_strictly_increase(self, design):
        p = design.params
        x0 = on_sigma(design.x_star.r + 0.012, design.x_star.omega - 0.015, p)
        segs = integrate(x0, ContactMode.stick(lambda_star(x0, p)), p,
                         IntegratorOptions(t_max=50.0))
        for seg in segs:
            assert np.all(np.diff(seg.times) > 0)
