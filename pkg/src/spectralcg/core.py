"""Shared numeric types: vectors, the problem interface, solver configuration,
and per-run telemetry.

Vectors are plain 1-D ``numpy.float64`` arrays throughout; :func:`as_vector`
is the validating constructor for user-supplied data.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

Vector = np.ndarray

_THETA_VARIANTS = ("r", "n")
_BETA_RULES = ("mddl", "zdk", "hs", "hz", "dl")


def as_vector(data: Sequence[float] | np.ndarray) -> Vector:
    """Convert ``data`` to a 1-D float64 vector, rejecting NaN/Inf entries."""
    v = np.array(data, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    if v.size < 1:
        raise ValueError("vector must have at least one element")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def inf_norm(v: Vector) -> float:
    """Max-abs entry of ``v`` (the norm used by the stopping rule)."""
    v = np.asarray(v)
    if v.size == 0:
        raise ValueError("inf_norm of an empty vector is undefined")
    return float(np.max(np.abs(v)))


class Problem(abc.ABC):
    """A smooth objective exposing its dimension, value, and gradient.

    Implementations must be deterministic for a fixed instance and safe to
    evaluate concurrently. Boundedness of the level set at the start point
    and Lipschitz continuity of the gradient near it are the caller's
    responsibility; they are not machine-checked.
    """

    @property
    @abc.abstractmethod
    def dimension(self) -> int:
        raise NotImplementedError

    @abc.abstractmethod
    def value(self, x: Vector) -> float:
        raise NotImplementedError

    @abc.abstractmethod
    def gradient(self, x: Vector) -> Vector:
        raise NotImplementedError


class CallableProblem(Problem):
    """Adapter turning a pair of callables into a :class:`Problem`."""

    def __init__(self, dimension: int, value: Callable[[Vector], float],
                 gradient: Callable[[Vector], Vector]):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self._dimension = int(dimension)
        self._value = value
        self._gradient = gradient

    @property
    def dimension(self) -> int:
        return self._dimension

    def value(self, x: Vector) -> float:
        return float(self._value(x))

    def gradient(self, x: Vector) -> Vector:
        return np.asarray(self._gradient(x), dtype=np.float64)


@dataclass(frozen=True)
class SolverParams:
    """Tunables of the spectral CG solver.

    ``delta``/``sigma`` are the sufficient-decrease and curvature constants of
    the strong Wolfe conditions; ``eta`` and ``tau`` bound the spectral
    parameter; ``r`` and ``nu`` shape the modified secant vector; ``p`` and
    ``q`` parameterize the conjugacy scalar. ``epsilon`` is the tolerance on
    the max-abs gradient norm. ``beta_rule`` selects the direction update:
    ``mddl`` (default), the ``zdk`` baseline, or the classical ``hs``/``hz``/
    ``dl`` rules (``dl`` uses the fixed scalar ``dl_t``). ``theta_variant``
    picks between the two spectral-parameter formulas ``r`` and ``n``.
    """

    delta: float = 0.01
    sigma: float = 0.1
    eta: float = 0.001
    tau: float = 10.0
    r: float = 1.0
    nu: float = 0.001
    p: float = 0.4
    q: float = 0.2
    epsilon: float = 1e-6
    theta_variant: str = "r"
    beta_rule: str = "mddl"
    dl_t: float = 1.0
    max_iterations: int = 10_000
    max_line_search_evals: int = 60

    def theta_lower_bound(self) -> float:
        return 1.0 / (4.0 * self.p) + abs(self.q) + self.eta


def validate_params(params: SolverParams) -> list[str]:
    """Return the list of violated parameter invariants (empty means valid)."""
    v: list[str] = []
    if not (0.0 < params.delta):
        v.append("delta > 0")
    if not (params.delta < params.sigma):
        v.append("delta < sigma")
    if not (params.sigma < 1.0):
        v.append("sigma < 1")
    if not (params.p > 0.25):
        v.append("p > 1/4")
    if not (params.q < 0.25):
        v.append("q < 1/4")
    if not (params.eta > 0.0):
        v.append("eta > 0")
    if not (params.r > 0.0):
        v.append("r > 0")
    if not (params.nu > 0.0):
        v.append("nu > 0")
    if not (params.epsilon > 0.0):
        v.append("epsilon > 0")
    if params.p > 0.25:
        lower = params.theta_lower_bound()
        if not (params.tau > lower):
            v.append("tau > 1/(4p) + |q| + eta")
        # The fallback value theta = 1 must itself lie inside the clamp
        # interval or the descent guarantee breaks.
        if not (lower <= 1.0 <= params.tau):
            v.append("1/(4p) + |q| + eta <= 1 <= tau")
    if params.theta_variant not in _THETA_VARIANTS:
        v.append("theta_variant in {r, n}")
    if params.beta_rule not in _BETA_RULES:
        v.append("beta_rule in {mddl, zdk, hs, hz, dl}")
    if params.beta_rule == "dl" and not (params.dl_t >= 0.0):
        v.append("dl_t >= 0")
    if params.max_iterations < 1:
        v.append("max_iterations >= 1")
    if params.max_line_search_evals < 1:
        v.append("max_line_search_evals >= 1")
    return v


@dataclass(frozen=True)
class IterationRecord:
    """Scalar telemetry for one completed iteration."""

    index: int
    f_value: float
    grad_inf_norm: float
    step_alpha: float
    theta: float
    beta: float
    wall_time_cumulative: float


# Termination reasons stored on SolveResult.
GRADIENT_TOLERANCE = "gradient_tolerance"
MAX_ITERATIONS = "max_iterations"
LINE_SEARCH_FAILURE = "line_search_failure"
CUSTOM_CRITERION = "custom_criterion"


@dataclass
class SolveResult:
    """Terminal report of one solve, plus the per-iteration trace.

    ``iterates`` is populated only when the solver is asked to store full
    iterates (path plots); by default the trace holds scalars only.
    """

    final_x: Vector
    iterations: int
    converged: bool
    termination_reason: str
    trace: list[IterationRecord]
    final_f: float
    final_grad_inf_norm: float
    iterates: list[Vector] | None = None
    metadata: dict = field(default_factory=dict)
