"""Step-length selection satisfying the strong Wolfe conditions.

The search brackets an acceptable interval by doubling the trial step, then
zooms with cubic interpolation (bisection when the interpolant is unusable).
Any step it returns satisfies both

    f(x + a*d) <= f(x) + delta * a * <g_x, d>
    |<grad f(x + a*d), d>|  <=  -sigma * <g_x, d>

for the configured ``delta`` and ``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Problem, SolverParams, Vector

BRACKET_GROWTH = 2.0
ZOOM_INTERVAL_FLOOR = 1e-16
# Trial points closer to a bracket endpoint than this fraction of the
# interval fall back to bisection.
INTERIOR_MARGIN = 0.1


class NotDescentDirection(Exception):
    """<g, d> >= 0: the direction update upstream is broken."""


class MaxEvaluationsExceeded(Exception):
    """No acceptable step within the evaluation budget."""


@dataclass(frozen=True)
class LineSearchOutcome:
    alpha: float
    f_new: float
    g_new: Vector
    evaluations: int


def _cubic_min(a, fa, fpa, b, fb, c, fc):
    """Minimizer of the cubic through (a,fa), (b,fb), (c,fc) with slope fpa
    at a, or None when it is undefined or non-finite."""
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            C = fpa
            db = b - a
            dc = c - a
            denom = (db * dc) ** 2 * (db - dc)
            A = (dc ** 2 * (fb - fa - C * db) - db ** 2 * (fc - fa - C * dc)) / denom
            B = (-dc ** 3 * (fb - fa - C * db) + db ** 3 * (fc - fa - C * dc)) / denom
            radical = B * B - 3.0 * A * C
            xmin = a + (-B + math.sqrt(radical)) / (3.0 * A)
        except (ArithmeticError, ValueError):
            return None
    return xmin if math.isfinite(xmin) else None


def _quad_min(a, fa, fpa, b, fb):
    """Minimizer of the quadratic through (a,fa), (b,fb) with slope fpa at a."""
    with np.errstate(divide="raise", over="raise", invalid="raise"):
        try:
            db = b - a
            B = (fb - fa - fpa * db) / (db * db)
            xmin = a - fpa / (2.0 * B)
        except (ArithmeticError, ValueError):
            return None
    return xmin if math.isfinite(xmin) else None


def strong_wolfe(problem: Problem, x: Vector, d: Vector, f_x: float,
                 g_x: Vector, params: SolverParams,
                 alpha_init: float = 1.0) -> LineSearchOutcome:
    """Find a step length along ``d`` satisfying the strong Wolfe conditions.

    Parameters
    ----------
    problem : Problem
        Objective being minimized.
    x, d : vectors
        Current point and search direction.
    f_x, g_x : float, vector
        Objective value and gradient at ``x`` (not re-evaluated).
    params : SolverParams
        Supplies ``delta``, ``sigma`` and ``max_line_search_evals``.
    alpha_init : float
        First trial step; callers typically warm-start with the previously
        accepted step.

    Returns
    -------
    LineSearchOutcome with the accepted step, the objective value and
    gradient at ``x + alpha*d``, and the number of problem evaluations used.

    Raises
    ------
    NotDescentDirection
        If ``<g_x, d> >= 0``.
    MaxEvaluationsExceeded
        If the budget runs out or the zoom interval collapses below
        ``ZOOM_INTERVAL_FLOOR`` before an acceptable step is found.

    Notes
    -----
    A NaN objective value at a trial point is treated like a sufficient-
    decrease failure (the bracket shrinks away from it); NaN at the accepted
    point is impossible since acceptance requires both inequalities to hold.
    """
    derphi0 = float(np.dot(g_x, d))
    if derphi0 >= 0.0:
        raise NotDescentDirection(f"<g, d> = {derphi0} is not negative")
    if not (alpha_init > 0.0 and math.isfinite(alpha_init)):
        raise ValueError(f"alpha_init must be positive and finite, got {alpha_init}")

    delta, sigma = params.delta, params.sigma
    budget = params.max_line_search_evals
    evals = [0]
    g_cache: dict[str, object] = {"alpha": None, "g": None}

    def phi(a: float) -> float:
        if evals[0] >= budget:
            raise MaxEvaluationsExceeded(f"budget of {budget} evaluations spent")
        evals[0] += 1
        return float(problem.value(x + a * d))

    def moves(a: float) -> bool:
        # A trial step below float resolution leaves x bitwise unchanged;
        # such an alpha can never produce decrease and must not become a
        # zoom endpoint (every smaller alpha is equally immobile).
        return not np.array_equal(x + a * d, x)

    def derphi(a: float) -> float:
        if evals[0] >= budget:
            raise MaxEvaluationsExceeded(f"budget of {budget} evaluations spent")
        evals[0] += 1
        g = np.asarray(problem.gradient(x + a * d), dtype=np.float64)
        g_cache["alpha"] = a
        g_cache["g"] = g
        return float(np.dot(g, d))

    def accept(a: float, f_a: float) -> LineSearchOutcome:
        assert g_cache["alpha"] == a
        return LineSearchOutcome(alpha=a, f_new=f_a, g_new=g_cache["g"],
                                 evaluations=evals[0])

    def armijo_fails(a: float, f_a: float) -> bool:
        # NaN rejects: comparisons with NaN are false, so test explicitly.
        return math.isnan(f_a) or f_a > f_x + delta * a * derphi0

    def zoom(a_lo, phi_lo, dphi_lo, a_hi, phi_hi, a_rec, phi_rec):
        # Invariants: a_lo satisfies Armijo; phi_lo < phi_hi or a_hi fails
        # Armijo; the interval [a_lo, a_hi] (either order) brackets a point
        # satisfying both conditions.
        while True:
            width = abs(a_hi - a_lo)
            if width < ZOOM_INTERVAL_FLOOR:
                raise MaxEvaluationsExceeded(
                    f"zoom interval collapsed to {width:.3e}")
            lo, hi = (a_lo, a_hi) if a_lo < a_hi else (a_hi, a_lo)
            margin = INTERIOR_MARGIN * width
            a_j = None
            if a_rec is not None:
                a_j = _cubic_min(a_lo, phi_lo, dphi_lo, a_hi, phi_hi,
                                 a_rec, phi_rec)
            if a_j is None:
                a_j = _quad_min(a_lo, phi_lo, dphi_lo, a_hi, phi_hi)
            if a_j is None or a_j < lo + margin or a_j > hi - margin:
                a_j = 0.5 * (lo + hi)
            phi_j = phi(a_j)
            if armijo_fails(a_j, phi_j) or phi_j >= phi_lo:
                a_rec, phi_rec = a_hi, phi_hi
                a_hi, phi_hi = a_j, phi_j
            else:
                dphi_j = derphi(a_j)
                if abs(dphi_j) <= -sigma * derphi0:
                    return accept(a_j, phi_j)
                if dphi_j * (a_hi - a_lo) >= 0.0:
                    a_rec, phi_rec = a_hi, phi_hi
                    a_hi, phi_hi = a_lo, phi_lo
                else:
                    a_rec, phi_rec = a_lo, phi_lo
                a_lo, phi_lo, dphi_lo = a_j, phi_j, dphi_j

    # Bracketing: grow the trial step until the minimum is straddled.
    a_prev, phi_prev, dphi_prev = 0.0, f_x, derphi0
    a = alpha_init
    first = True
    while True:
        if not moves(a):
            if evals[0] >= budget:
                raise MaxEvaluationsExceeded(
                    f"budget of {budget} evaluations spent on immobile steps")
            a *= BRACKET_GROWTH
            continue
        phi_a = phi(a)
        if armijo_fails(a, phi_a) or (phi_a >= phi_prev and not first):
            return zoom(a_prev, phi_prev, dphi_prev, a, phi_a, None, None)
        dphi_a = derphi(a)
        if abs(dphi_a) <= -sigma * derphi0:
            return accept(a, phi_a)
        if dphi_a >= 0.0:
            return zoom(a, phi_a, dphi_a, a_prev, phi_prev, None, None)
        a_prev, phi_prev, dphi_prev = a, phi_a, dphi_a
        a *= BRACKET_GROWTH
        first = False
