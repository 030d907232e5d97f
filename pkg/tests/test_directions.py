import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectralcg import (DegenerateInnerProduct, SolverParams, StepPair,
                        beta_dl, beta_hs, beta_hz, beta_mddl, beta_zdk,
                        clamp_theta, dai_liao_t, direction_matrix,
                        modified_secant_z, next_direction, theta_mscg,
                        theta_raw, update_direction)

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


class TestModifiedSecant:
    def test_nonnegative_curvature_branch(self):
        z = modified_secant_z(StepPair(s=E1, y=E1.copy(), g_prev_norm=1.0),
                              r=1.0, nu=0.001)
        assert np.allclose(z, [1.001, 0.0], rtol=0, atol=1e-15)

    def test_negative_curvature_branch(self):
        # <s,y> = -2, so h = nu + 2 and z = y + 2.001 * s
        z = modified_secant_z(StepPair(s=E1, y=np.array([-2.0, 0.0]),
                                       g_prev_norm=1.0), r=1.0, nu=0.001)
        assert np.allclose(z, [0.001, 0.0], rtol=0, atol=1e-15)

    @given(st.integers(2, 8), st.integers(0, 2**32 - 1))
    @settings(max_examples=200, deadline=None)
    def test_curvature_lower_bound(self, dim, seed):
        rng = np.random.default_rng(seed)
        s = rng.standard_normal(dim)
        y = rng.standard_normal(dim) * rng.uniform(0.1, 10.0)
        gn = rng.uniform(1e-3, 1e3)
        r, nu = 1.0, 0.001
        z = modified_secant_z(StepPair(s=s, y=y, g_prev_norm=gn), r, nu)
        bound = nu * gn ** r * float(np.dot(s, s))
        slack = 1e-12 * (abs(float(np.dot(s, y))) + bound)
        assert float(np.dot(z, s)) >= bound - slack


class TestDaiLiaoT:
    def test_direct_substitution(self):
        t = dai_liao_t(E1, np.array([1.001, 0.0]), p=0.4, q=0.2)
        assert t == pytest.approx(0.2002, rel=1e-12)

    def test_unit_collinear(self):
        assert dai_liao_t(E1, E1.copy(), p=1.0, q=0.0) == pytest.approx(1.0)

    def test_parallel_vectors_ratios_coincide(self):
        t = dai_liao_t(np.array([2.0, 0.0]), np.array([2.0, 0.0]), p=0.4, q=0.2)
        assert t == pytest.approx(0.2, rel=1e-14)

    def test_nonpositive_curvature_rejected(self):
        with pytest.raises(DegenerateInnerProduct):
            dai_liao_t(E1, -E1, p=0.4, q=0.2)


class TestBetaRules:
    def test_mddl_orthogonal_numerators(self):
        g = np.array([0.0, 0.0, 1.0])
        s = np.array([1.0, 0.0, 0.0])
        z = np.array([0.0, 1.0, 0.0])
        d = np.array([1.0, 1.0, 0.0])
        assert beta_mddl(g, s, z, d, t=0.7) == 0.0

    def test_mddl_direct_substitution(self):
        assert beta_mddl(E1, E1, E1, E1, t=0.2002) == pytest.approx(0.7998)

    def test_mddl_t_zero_is_hs_form_with_z(self):
        rng = np.random.default_rng(7)
        g, s, z, d = (rng.standard_normal(5) for _ in range(4))
        assert beta_mddl(g, s, z, d, 0.0) == pytest.approx(
            float(np.dot(g, z) / np.dot(d, z)), rel=1e-14)

    def test_mddl_degenerate_denominator(self):
        with pytest.raises(DegenerateInnerProduct):
            beta_mddl(E1, E1, E1, np.array([0.0, 1.0]), t=0.1)

    def test_zdk_orthogonal(self):
        g = np.array([0.0, 0.0, 1.0])
        z = np.array([1.0, 0.0, 0.0])
        d = np.array([1.0, 1.0, 0.0])
        # <g,z> = 0 and <g,d> = 0
        assert beta_zdk(g, z, d) == 0.0

    def test_zdk_unit_case(self):
        assert beta_zdk(E1, E1, E1) == 0.0

    def test_zdk_degenerate(self):
        with pytest.raises(DegenerateInnerProduct):
            beta_zdk(np.array([1.0, 1.0]), E1, E2)

    def test_hs_hz_dl_forms(self):
        rng = np.random.default_rng(11)
        g, y, d, s = (rng.standard_normal(6) for _ in range(4))
        dy = float(np.dot(d, y))
        assert beta_hs(g, y, d) == pytest.approx(float(np.dot(g, y)) / dy)
        hz = (float(np.dot(g, y)) - 2.0 * float(np.dot(y, y))
              * float(np.dot(g, d)) / dy) / dy
        assert beta_hz(g, y, d) == pytest.approx(hz, rel=1e-12)
        dl = (float(np.dot(g, y)) - 1.5 * float(np.dot(g, s))) / dy
        assert beta_dl(g, s, y, d, 1.5) == pytest.approx(dl, rel=1e-12)


class TestThetaRaw:
    def test_orthogonal_step_gives_one(self):
        g = E2
        s = E1
        z = np.array([1.0, 1.0])
        for variant in ("r", "n"):
            assert theta_raw(g, s, z, t=3.0, variant=variant) == 1.0

    def test_variant_n_t_one_s_equals_z(self):
        s = np.array([1.0, 2.0])
        assert theta_raw(np.array([0.5, 0.5]), s, s, t=1.0, variant="n") == \
            pytest.approx(0.0)

    def test_variant_r_t_one_is_one(self):
        rng = np.random.default_rng(3)
        g, s, z = (rng.standard_normal(4) for _ in range(3))
        assert theta_raw(g, s, z, t=1.0, variant="r") == 1.0

    def test_zero_denominator_sentinel(self):
        raw = theta_raw(E2, E1, E1, t=2.0, variant="r")
        assert not (0.826 <= raw <= 10.0)
        assert clamp_theta(raw, 0.4, 0.2, 0.001, 10.0) == 1.0


class TestClampTheta:
    # with p=0.4, q=0.2, eta=0.001 the interval is [0.826, 10]
    @pytest.mark.parametrize("raw,expected", [
        (0.5, 1.0), (2.3, 2.3), (11.0, 1.0), (0.826, 0.826), (10.0, 10.0),
        (math.nan, 1.0), (math.inf, 1.0),
    ])
    def test_cases(self, raw, expected):
        assert clamp_theta(raw, 0.4, 0.2, 0.001, 10.0) == expected

    @given(st.floats(allow_nan=True, allow_infinity=True))
    def test_idempotent(self, raw):
        once = clamp_theta(raw, 0.4, 0.2, 0.001, 10.0)
        assert clamp_theta(once, 0.4, 0.2, 0.001, 10.0) == once

    @given(st.floats(allow_nan=True, allow_infinity=True))
    def test_range(self, raw):
        out = clamp_theta(raw, 0.4, 0.2, 0.001, 10.0)
        assert 0.826 <= out <= 10.0


class TestNextDirection:
    def test_steepest_descent(self):
        assert np.array_equal(next_direction(np.array([2.0, -3.0]),
                                             np.zeros(2), 1.0, 0.0),
                              [-2.0, 3.0])

    def test_componentwise(self):
        d = next_direction(E1, np.array([0.0, 2.0]), theta=2.0, beta=0.5)
        assert np.array_equal(d, [-2.0, 1.0])


class TestThetaMscg:
    def test_orthogonal_gd_gives_one(self):
        assert theta_mscg(E2, E1, E1, 0.4, 0.2, 0.001, 10.0) == 1.0

    def test_out_of_range_falls_back(self):
        # raw = 1 - (1/1) * (-40/1) = 41, above tau
        g = np.array([1.0, -41.0])
        d = np.array([1.0, 1.0])
        assert theta_mscg(g, E1, d, 0.4, 0.2, 0.001, 10.0) == 1.0

    def test_in_range_identity(self):
        # z=(1,0), d=(1,1), g=(1,-3): raw = 1 - 1 * (-2)/1 = 3
        g = np.array([1.0, -3.0])
        d = np.array([1.0, 1.0])
        assert theta_mscg(g, E1, d, 0.4, 0.2, 0.001, 10.0) == pytest.approx(3.0)


def _random_pipeline(rng, dim):
    d_prev = rng.standard_normal(dim)
    alpha = rng.uniform(1e-3, 10.0)
    s = alpha * d_prev
    y = rng.standard_normal(dim)
    g_prev_norm = rng.uniform(1e-3, 1e3)
    g_next = rng.standard_normal(dim)
    return d_prev, s, y, g_prev_norm, g_next


class TestMatrixForm:
    def test_consistent_denominator_matches_recursion(self):
        # with the rank-one matrix built entirely from <s,z>, -Q g equals the
        # beta-recursion direction at theta = 1 to machine precision
        rng = np.random.default_rng(2024)
        for _ in range(100):
            dim = int(rng.integers(2, 11))
            d_prev, s, y, g_prev_norm, g = _random_pipeline(rng, dim)
            z = modified_secant_z(StepPair(s=s, y=y, g_prev_norm=g_prev_norm),
                                  1.0, 0.001)
            t = dai_liao_t(s, z, 0.4, 0.2)
            beta = beta_mddl(g, s, z, d_prev, t)
            d_next = next_direction(g, d_prev, 1.0, beta)
            Q = direction_matrix(s, z, y, t, third_denominator="sz")
            assert np.linalg.norm(d_next + Q @ g) <= \
                1e-12 * np.linalg.norm(d_next)

    def test_mixed_denominator_differs_generically(self):
        # the published mixed form (third term over <s,y>) cannot reproduce
        # the recursion whenever t*<g,s> != 0, since <s,z> - <s,y> > 0 always
        rng = np.random.default_rng(99)
        d_prev, s, y, g_prev_norm, g = _random_pipeline(rng, 6)
        z = modified_secant_z(StepPair(s=s, y=y, g_prev_norm=g_prev_norm),
                              1.0, 0.001)
        t = dai_liao_t(s, z, 0.4, 0.2)
        beta = beta_mddl(g, s, z, d_prev, t)
        d_next = next_direction(g, d_prev, 1.0, beta)
        Q = direction_matrix(s, z, y, t, third_denominator="sy")
        assert np.linalg.norm(d_next + Q @ g) > \
            1e-10 * np.linalg.norm(d_next)


class TestUpdateDirection:
    def test_dispatch_matches_primitives(self):
        rng = np.random.default_rng(5)
        dim = 6
        d_prev, s, y, g_prev_norm, g = _random_pipeline(rng, dim)
        pair = StepPair(s=s, y=y, g_prev_norm=g_prev_norm)
        params = SolverParams()
        state = update_direction(g, d_prev, pair, params)
        z = modified_secant_z(pair, params.r, params.nu)
        t = dai_liao_t(s, z, params.p, params.q)
        assert state.t == pytest.approx(t)
        assert state.beta == pytest.approx(beta_mddl(g, s, z, d_prev, t))
        assert np.allclose(state.d_next,
                           next_direction(g, d_prev, state.theta, state.beta))

    def test_classical_rules_use_theta_one(self):
        rng = np.random.default_rng(6)
        d_prev, s, y, g_prev_norm, g = _random_pipeline(rng, 4)
        pair = StepPair(s=s, y=y, g_prev_norm=g_prev_norm)
        for rule in ("hs", "hz", "dl"):
            state = update_direction(g, d_prev, pair,
                                     SolverParams(beta_rule=rule))
            assert state.theta == 1.0

    def test_sufficient_descent_sampled(self):
        # quick version of the acceptance suite's randomized descent check
        rng = np.random.default_rng(12)
        params = SolverParams()
        for _ in range(500):
            dim = int(rng.integers(2, 20))
            d_prev, s, y, g_prev_norm, g = _random_pipeline(rng, dim)
            x_shift = s  # s is alpha * d_prev by construction
            state = update_direction(g, d_prev,
                                     StepPair(s=x_shift, y=y,
                                              g_prev_norm=g_prev_norm), params)
            lhs = float(np.dot(g, state.d_next))
            gg = float(np.dot(g, g))
            scale = state.theta * gg + abs(state.beta) * abs(
                float(np.dot(g, d_prev))) + params.eta * gg
            assert lhs <= -params.eta * gg + 1e-12 * scale
