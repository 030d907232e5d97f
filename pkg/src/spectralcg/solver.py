"""The spectral CG iteration loop: stopping rule, line search, direction
update, restart safeguard, and trace production."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (CUSTOM_CRITERION, GRADIENT_TOLERANCE, LINE_SEARCH_FAILURE,
                   MAX_ITERATIONS, IterationRecord, Problem, SolveResult,
                   SolverParams, inf_norm, validate_params)
from .directions import (DegenerateInnerProduct, DegenerateStep, StepPair,
                         update_direction)
from .linesearch import (MaxEvaluationsExceeded, NotDescentDirection,
                         strong_wolfe)

# Warm-start clamp for the initial line-search trial step.
ALPHA_INIT_MIN = 1e-12
ALPHA_INIT_MAX = 1e12


class NonFiniteValue(Exception):
    """The problem produced NaN/Inf at an accepted point (a problem bug)."""


@dataclass(frozen=True)
class StoppingRule:
    """Either the max-abs gradient-norm test or a custom predicate over the
    current iterate and trace."""

    epsilon: float | None = None
    predicate: Callable[[np.ndarray, list[IterationRecord]], bool] | None = None

    @classmethod
    def grad_inf_norm(cls, epsilon: float) -> "StoppingRule":
        if not epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        return cls(epsilon=epsilon, predicate=None)

    @classmethod
    def custom(cls, predicate: Callable[[np.ndarray, list[IterationRecord]], bool]
               ) -> "StoppingRule":
        return cls(epsilon=None, predicate=predicate)

    def satisfied(self, x: np.ndarray, grad_inf: float,
                  trace: list[IterationRecord]) -> bool:
        if self.predicate is not None:
            return bool(self.predicate(x, trace))
        return grad_inf < self.epsilon

    @property
    def reason(self) -> str:
        return CUSTOM_CRITERION if self.predicate is not None else GRADIENT_TOLERANCE


def restart_direction(g: np.ndarray) -> np.ndarray:
    """Steepest-descent restart: -g."""
    return -g


def _check_finite(f: float, g: np.ndarray, where: str) -> None:
    if not math.isfinite(f) or not np.all(np.isfinite(g)):
        raise NonFiniteValue(f"non-finite objective or gradient at {where}")


def minimize(problem: Problem, x0, params: SolverParams = SolverParams(),
             stop: StoppingRule | None = None,
             store_iterates: bool = False) -> SolveResult:
    """Minimize ``problem`` from ``x0`` with the spectral CG method selected
    by ``params.beta_rule``.

    Each iteration checks the stopping rule, takes a strong-Wolfe step along
    the current direction, then builds the next direction from the modified
    secant vector and the configured conjugate/spectral parameters. On a
    line-search failure or a degenerate inner product the direction is reset
    to steepest descent once; a second consecutive failure terminates the
    run with ``line_search_failure``. (The underlying method has no such
    safeguard; the restart is this implementation's finite-precision
    fallback and preserves the update otherwise.)

    ``stop`` defaults to the gradient test with ``params.epsilon``. With
    ``store_iterates`` the result carries every iterate (memory grows with
    dimension times iteration count).

    Raises :class:`NonFiniteValue` if the problem evaluates to NaN/Inf at an
    accepted point, and ``ValueError`` for invalid parameters or a start
    point of the wrong dimension.
    """
    violations = validate_params(params)
    if violations:
        raise ValueError("invalid solver parameters: " + "; ".join(violations))
    x = np.array(x0, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != problem.dimension:
        raise ValueError(f"x0 must be a vector of length {problem.dimension}")
    if stop is None:
        stop = StoppingRule.grad_inf_norm(params.epsilon)

    f = float(problem.value(x))
    g = np.asarray(problem.gradient(x), dtype=np.float64)
    _check_finite(f, g, "the start point")

    d = -g
    d_is_restart = True  # d0 is steepest descent; a failed first search ends the run
    trace: list[IterationRecord] = []
    iterates = [x.copy()] if store_iterates else None
    alpha_prev: float | None = None
    n = 0
    t_start = time.perf_counter()

    while True:
        g_inf = inf_norm(g)
        if stop.satisfied(x, g_inf, trace):
            return SolveResult(final_x=x, iterations=n, converged=True,
                               termination_reason=stop.reason, trace=trace,
                               final_f=f, final_grad_inf_norm=g_inf,
                               iterates=iterates)
        if n >= params.max_iterations:
            return SolveResult(final_x=x, iterations=n, converged=False,
                               termination_reason=MAX_ITERATIONS, trace=trace,
                               final_f=f, final_grad_inf_norm=g_inf,
                               iterates=iterates)

        if float(np.dot(g, d)) >= 0.0 and not d_is_restart:
            d = restart_direction(g)
            d_is_restart = True

        # Warm-start from the previous step; restart directions are treated
        # like iteration 0 (their scale is unrelated to the previous one, and
        # a tiny warm step can stall below float resolution near a minimum).
        if alpha_prev is None or d_is_restart:
            alpha_init = 1.0
        else:
            alpha_init = min(max(alpha_prev, ALPHA_INIT_MIN), ALPHA_INIT_MAX)
        try:
            ls = strong_wolfe(problem, x, d, f, g, params, alpha_init)
        except (NotDescentDirection, MaxEvaluationsExceeded):
            if d_is_restart:
                return SolveResult(final_x=x, iterations=n, converged=False,
                                   termination_reason=LINE_SEARCH_FAILURE,
                                   trace=trace, final_f=f,
                                   final_grad_inf_norm=g_inf,
                                   iterates=iterates)
            d = restart_direction(g)
            d_is_restart = True
            continue

        x_new = x + ls.alpha * d
        f_new, g_new = ls.f_new, ls.g_new
        _check_finite(f_new, g_new, f"iteration {n}")

        pair = StepPair(s=x_new - x, y=g_new - g,
                        g_prev_norm=float(np.linalg.norm(g)))
        try:
            state = update_direction(g_new, d, pair, params)
            d_next, theta, beta = state.d_next, state.theta, state.beta
            next_is_restart = False
        except (DegenerateStep, DegenerateInnerProduct):
            d_next = restart_direction(g_new)
            theta, beta = 1.0, 0.0
            next_is_restart = True

        trace.append(IterationRecord(
            index=n, f_value=f_new, grad_inf_norm=inf_norm(g_new),
            step_alpha=ls.alpha, theta=theta, beta=beta,
            wall_time_cumulative=time.perf_counter() - t_start))
        x, f, g, d = x_new, f_new, g_new, d_next
        d_is_restart = next_is_restart
        alpha_prev = ls.alpha
        n += 1
        if store_iterates:
            iterates.append(x.copy())
