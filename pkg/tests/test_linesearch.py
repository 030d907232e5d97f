import numpy as np
import pytest

from spectralcg import (CallableProblem, MaxEvaluationsExceeded,
                        NotDescentDirection, SolverParams, strong_wolfe)


def _problem(value, grad, dim=1):
    return CallableProblem(dim, value, grad)


HALF_SQUARE = _problem(lambda x: 0.5 * float(x @ x), lambda x: x)


def wolfe_holds(problem, x, d, f_x, g_x, out, delta, sigma):
    """Re-verify both inequalities by independent evaluation."""
    x_new = x + out.alpha * d
    gTd = float(np.dot(g_x, d))
    armijo = problem.value(x_new) <= f_x + delta * out.alpha * gTd
    curvature = abs(float(np.dot(problem.gradient(x_new), d))) <= -sigma * gTd
    return armijo and curvature


class TestAcceptedSteps:
    def test_unit_step_accepted_on_quadratic(self):
        # phi(1) = 0 <= 0.5 - 0.01 and phi'(1) = 0: the first trial is taken
        x, d = np.array([1.0]), np.array([-1.0])
        params = SolverParams(delta=0.01, sigma=0.1)
        out = strong_wolfe(HALF_SQUARE, x, d, 0.5, x.copy(), params)
        assert out.alpha == 1.0
        assert out.f_new == 0.0
        assert out.evaluations >= 1

    def test_shifted_quadratic_alpha_in_curvature_band(self):
        prob = _problem(lambda x: float((x[0] - 1.0) ** 2),
                        lambda x: np.array([2.0 * (x[0] - 1.0)]))
        x, d = np.array([0.0]), np.array([1.0])
        for sigma in (0.1, 0.4, 0.9):
            params = SolverParams(delta=0.01, sigma=sigma)
            out = strong_wolfe(prob, x, d, 1.0, np.array([-2.0]), params)
            assert 1.0 - sigma <= out.alpha <= 1.0 + sigma

    def test_outcome_matches_independent_evaluation(self):
        rng = np.random.default_rng(42)
        params = SolverParams(delta=0.01, sigma=0.1)
        for _ in range(50):
            dim = int(rng.integers(1, 8))
            A = rng.standard_normal((dim, dim))
            A = A @ A.T + dim * np.eye(dim)
            b = rng.standard_normal(dim)
            prob = _problem(lambda x, A=A, b=b: 0.5 * float(x @ A @ x) + float(b @ x),
                            lambda x, A=A, b=b: A @ x + b, dim)
            x = rng.standard_normal(dim)
            g = prob.gradient(x)
            d = -g + 0.1 * rng.standard_normal(dim)
            if float(np.dot(g, d)) >= 0.0:
                d = -g
            f = prob.value(x)
            out = strong_wolfe(prob, x, d, f, g, params,
                               alpha_init=float(rng.uniform(0.01, 5.0)))
            assert wolfe_holds(prob, x, d, f, g, out, params.delta, params.sigma)
            assert out.f_new < f  # monotone descent
            assert np.allclose(out.g_new, prob.gradient(x + out.alpha * d))

    def test_warm_start_far_from_solution_still_conforms(self):
        x, d = np.array([4.0]), np.array([-1.0])
        params = SolverParams(delta=0.01, sigma=0.1)
        out = strong_wolfe(HALF_SQUARE, x, d, 8.0, x.copy(), params,
                           alpha_init=64.0)
        assert wolfe_holds(HALF_SQUARE, x, d, 8.0, x.copy(), out,
                           params.delta, params.sigma)


class TestFailures:
    def test_ascent_direction_rejected(self):
        x = np.array([1.0])
        with pytest.raises(NotDescentDirection):
            strong_wolfe(HALF_SQUARE, x, np.array([1.0]), 0.5, x.copy(),
                         SolverParams())

    def test_budget_on_linear_objective(self):
        # phi' is constant, so the curvature condition never holds and the
        # bracket grows until the evaluation budget runs out
        prob = _problem(lambda x: float(-x[0]), lambda x: np.array([-1.0]))
        with pytest.raises(MaxEvaluationsExceeded):
            strong_wolfe(prob, np.array([0.0]), np.array([1.0]), 0.0,
                         np.array([-1.0]), SolverParams(max_line_search_evals=30))

    def test_nan_region_is_avoided_or_fails_cleanly(self):
        # objective turns NaN past x=2; trials beyond are treated as
        # failing sufficient decrease, so any accepted step stays clean
        def value(x):
            return float(x[0] ** 2 - 2 * x[0]) if x[0] < 2.0 else float("nan")

        def grad(x):
            return np.array([2.0 * x[0] - 2.0])

        prob = _problem(value, grad)
        out = strong_wolfe(prob, np.array([0.0]), np.array([1.0]), 0.0,
                           np.array([-2.0]), SolverParams(), alpha_init=8.0)
        assert out.alpha < 2.0 and np.isfinite(out.f_new)

    def test_invalid_alpha_init(self):
        x = np.array([1.0])
        with pytest.raises(ValueError):
            strong_wolfe(HALF_SQUARE, x, -x, 0.5, x.copy(), SolverParams(),
                         alpha_init=0.0)
