import json
import math

import numpy as np
import pytest

from frictiondisc import (
    ContactMode,
    IntegratorOptions,
    State,
    SystemParams,
    forced_field,
    friction_decomposition,
    friction_lever,
    integrate,
    lateral_velocity,
    rolling_velocity,
    slider_force,
    to_physical_time,
    vector_field,
)

from freebody import freebody_field


def rand_params(rng) -> SystemParams:
    return SystemParams(
        d=rng.uniform(0.2, 2.0),
        m=rng.uniform(0.2, 2.0),
        beta=rng.uniform(0.05, 1.0),
        c1=rng.uniform(0.0, 0.5),
        c2=rng.uniform(0.0, 0.5),
        k2=rng.uniform(0.1, 3.0),
        r0=rng.uniform(-1.0, 1.0),
        omega0=rng.uniform(-2.0, 2.0),
        mu=rng.uniform(0.2, 2.0),
        gamma=rng.uniform(-math.pi + 1e-6, math.pi),
        kappa=rng.uniform(-1.0, 1.0),
    )


class TestVelocities:
    def test_h_gamma_zero(self, base_params):
        p = base_params.replace(gamma=0.0, kappa=0.3, k2=1.0)
        rng = np.random.default_rng(0)
        for _ in range(20):
            r, v, w = rng.uniform(-2, 2, 3)
            assert lateral_velocity((r, v, w), p) == pytest.approx(r * (p.omega0 - w), abs=1e-15)

    def test_h_gamma_half_pi(self, base_params):
        p = base_params.replace(gamma=math.pi / 2, kappa=0.3, k2=1.0)
        rng = np.random.default_rng(1)
        for _ in range(20):
            r, v, w = rng.uniform(-2, 2, 3)
            assert lateral_velocity((r, v, w), p) == pytest.approx(
                p.d * (w - p.omega0) - v, abs=1e-15
            )

    def test_h_zero_on_matched_motion(self, params):
        for r in (-0.5, 0.0, 1.3):
            assert lateral_velocity((r, 0.0, params.omega0), params) == 0.0

    def test_g_gamma_zero(self, base_params):
        p = base_params.replace(gamma=0.0, kappa=0.3, k2=1.0)
        r, v, w = 0.7, -0.2, 0.4
        assert rolling_velocity((r, v, w), p) == pytest.approx(-(v - p.d * (w - p.omega0)))

    def test_g_zero_on_matched_motion(self, params):
        assert rolling_velocity((0.3, 0.0, params.omega0), params) == 0.0

    def test_g_frozen_value(self, params):
        # direct substitution at the published operating point
        g = rolling_velocity((0.1859, -0.030122, -1.037), params)
        assert g == pytest.approx(0.009727173014036437, rel=1e-12)

    def test_linear_in_v_omega(self, params):
        rng = np.random.default_rng(2)
        r = 0.37
        for fun in (lateral_velocity, rolling_velocity):
            v1, w1, v2, w2 = rng.uniform(-2, 2, 4)
            a1, a2 = rng.uniform(-3, 3, 2)
            lhs = fun((r, a1 * v1 + a2 * v2, a1 * w1 + a2 * w2), params)
            # affine in (v, omega): subtract the offset at the origin
            f0 = fun((r, 0.0, 0.0), params)
            rhs = a1 * (fun((r, v1, w1), params) - f0) + a2 * (fun((r, v2, w2), params) - f0) + f0
            assert lhs == pytest.approx(rhs, abs=1e-13)


class TestForceTerms:
    def test_slider_force_zero(self, params):
        assert slider_force((params.r0, 0.0, 0.0), params) == 0.0

    def test_lever_at_origin(self, params):
        assert friction_lever(0.0, params) == pytest.approx(
            params.beta**2 * math.sin(params.gamma)
        )

    def test_lever_frozen_value(self, params):
        assert friction_lever(0.1859, params) == pytest.approx(
            -0.15765568647628303, rel=1e-14
        )


class TestVectorField:
    def test_rdot_vanishes_with_v(self, params):
        f = vector_field((0.8, 0.0, 1.2), ContactMode.stick(0.5), params)
        assert f[0] == 0.0

    def test_stick_zero_equals_unforced(self, params):
        x = (0.4, -0.1, -0.9)
        np.testing.assert_allclose(
            vector_field(x, ContactMode.stick(0.0), params),
            forced_field(x, 0.0, 0.0, params),
            rtol=0, atol=0,
        )

    def test_stick_rejects_excess_force(self, params):
        with pytest.raises(ValueError):
            vector_field((0.1, 0.0, -1.0), ContactMode.stick(2.0 * params.mu), params)

    def test_linearity_exact(self, params):
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = rng.uniform(-2, 2, 3)
            lam = rng.uniform(-params.mu, params.mu)
            f0, fdir = friction_decomposition(x, params)
            np.testing.assert_array_equal(
                vector_field(x, ContactMode.stick(lam), params), f0 + lam * fdir
            )

    def test_two_sided_jump_identity(self, params):
        rng = np.random.default_rng(4)
        mu = params.mu
        for _ in range(30):
            r, w = rng.uniform(-1, 1, 2)
            cot_g = math.cos(params.gamma) / math.sin(params.gamma)
            x = np.array([r, (w - params.omega0) * (params.d - r * cot_g), w])
            assert abs(lateral_velocity(x, params)) < 1e-12
            jump = (vector_field(x, ContactMode.stick(+mu), params)
                    - vector_field(x, ContactMode.stick(-mu), params))
            _, fdir = friction_decomposition(x, params)
            np.testing.assert_allclose(jump, 2.0 * mu * fdir, rtol=0, atol=1e-15)

    def test_gamma0_friction_direction_drops_out(self, base_params):
        kappa = 0.31
        p = base_params.replace(gamma=0.0, kappa=kappa, k2=1.2)
        _, fdir = friction_decomposition((-kappa, 0.4, -0.7), p)
        np.testing.assert_allclose(fdir, 0.0, atol=1e-16)

    def test_rank_two_at_design_point(self, design):
        f0, fdir = friction_decomposition(design.x_star, design.params)
        rank = np.linalg.matrix_rank(np.vstack([f0, fdir]), tol=1e-12)
        assert rank == 2


class TestFreeBodyOracle:
    def test_agreement_random(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(100):
            p = rand_params(rng)
            x = rng.uniform(-2, 2, 3)
            F, M = rng.uniform(-1.5, 1.5, 2)
            reduced = forced_field(x, F, M, p)
            oracle = freebody_field(x, F, M, p)
            rel = np.max(np.abs(reduced - oracle) / np.maximum(1e-30, np.abs(oracle)))
            worst = max(worst, float(rel))
        assert worst <= 1e-10


class TestSerialization:
    def test_roundtrip(self, params):
        again = SystemParams.from_json(params.to_json())
        assert again == params

    def test_keys_exact(self, params):
        data = json.loads(params.to_json())
        assert sorted(data) == sorted(
            ["d", "m", "beta", "c1", "c2", "k2", "r0", "omega0", "mu", "gamma", "kappa"]
        )

    def test_missing_key_rejected(self, params):
        data = json.loads(params.to_json())
        del data["mu"]
        with pytest.raises(ValueError, match="missing"):
            SystemParams.from_json(json.dumps(data))

    def test_unknown_key_rejected(self, params):
        data = json.loads(params.to_json())
        data["extra"] = 1.0
        with pytest.raises(ValueError, match="unknown"):
            SystemParams.from_json(json.dumps(data))

    @pytest.mark.parametrize("field,value", [("m", -1.0), ("beta", 0.0), ("mu", -0.1),
                                             ("gamma", 4.0)])
    def test_validation(self, params, field, value):
        data = json.loads(params.to_json())
        data[field] = value
        with pytest.raises(ValueError):
            SystemParams.from_json(json.dumps(data))


class TestState:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            State(math.nan, 0.0, 0.0)

    def test_array_roundtrip(self):
        s = State(0.1, -0.2, 0.3)
        assert State.from_array(s.as_array()) == State(0.1, -0.2, 0.3)


class TestPhysicalTime:
    def test_slider_speed_is_physical_derivative(self, params):
        # in physical time dr/dt equals v; check along a slip stretch
        s0 = State(0.3, 0.05, -0.8)
        opts = IntegratorOptions(t_max=0.5, max_step=1e-3)
        segs = integrate(s0, ContactMode.slip_positive(), params, opts)
        times = segs[0].times
        states = segs[0].states
        assert len(times) > 50
        t_phys = to_physical_time(times, states[:, 0], params)
        drdt = np.gradient(states[:, 0], t_phys)
        mid = slice(5, -5)
        np.testing.assert_allclose(drdt[mid], states[mid, 1], rtol=1e-4, atol=1e-8)

    def test_shapes_checked(self, params):
        with pytest.raises(ValueError):
            to_physical_time([0.0, 1.0], [0.0], params)
