"""Plug a user-defined objective into the solver.

Any object with dimension / value / gradient works; here the Rosenbrock
function is defined through the CallableProblem adapter and solved with a
custom stopping rule.
"""

import numpy as np

from spectralcg import CallableProblem, SolverParams, StoppingRule, minimize


def rosenbrock(x):
    return float(100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2)


def rosenbrock_grad(x):
    return np.array([
        -400.0 * x[0] * (x[1] - x[0] ** 2) - 2.0 * (1.0 - x[0]),
        200.0 * (x[1] - x[0] ** 2),
    ])


problem = CallableProblem(2, rosenbrock, rosenbrock_grad)
x0 = np.array([-1.2, 1.0])

res = minimize(problem, x0, SolverParams(epsilon=1e-10))
print(f"gradient stopping rule: {res.iterations} iterations, "
      f"x = {res.final_x}, f = {res.final_f:.3e}")

# stop as soon as the function value drops below 1e-6 instead
stop = StoppingRule.custom(lambda x, trace: rosenbrock(x) < 1e-6)
res = minimize(problem, x0, SolverParams(), stop)
print(f"value stopping rule:    {res.iterations} iterations, "
      f"x = {res.final_x}, f = {res.final_f:.3e}")

# the per-iteration trace carries the step and direction scalars
rec = res.trace[len(res.trace) // 2]
print(f"mid-run record: iteration {rec.index}, f = {rec.f_value:.4f}, "
      f"alpha = {rec.step_alpha:.3f}, theta = {rec.theta:.3f}, "
      f"beta = {rec.beta:.3f}")
