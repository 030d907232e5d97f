"""Direction-update mathematics for the spectral CG family.

Everything here is a pure function of its arguments. The main pipeline,
run once per iteration by the solver, is

    z = modified_secant_z(pair, r, nu)
    t = dai_liao_t(s, z, p, q)
    beta = beta_mddl(g_next, s, z, d, t)
    theta = clamp_theta(theta_raw(g_next, s, z, t, variant), p, q, eta, tau)
    d_next = next_direction(g_next, d, theta, beta)

with the guarantee that whenever ``s`` is a positive multiple of ``d`` (as
it is for every solver step, however the step length was chosen),
``<g_next, d_next> <= -eta * ||g_next||^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SolverParams, Vector

# Absolute guard below which a denominator counts as degenerate rather than
# merely small; late-stage solves legitimately produce tiny inner products.
DENOMINATOR_GUARD = 1e-300


class DegenerateStep(Exception):
    """The step or previous gradient vanished; no secant update is possible."""


class DegenerateInnerProduct(Exception):
    """A denominator inner product is (numerically) zero or has the wrong sign."""


@dataclass(frozen=True)
class StepPair:
    """One iteration's displacement ``s``, gradient change ``y``, and the
    Euclidean norm of the gradient at the step's start point."""

    s: Vector
    y: Vector
    g_prev_norm: float


@dataclass(frozen=True)
class DirectionState:
    """All intermediates of one direction update, for tracing and tests."""

    z: Vector
    t: float
    beta: float
    theta_raw: float
    theta: float
    d_next: Vector


def modified_secant_z(pair: StepPair, r: float, nu: float) -> Vector:
    """Secant vector z = y + h * ||g_prev||^r * s with
    h = nu + max(-<s,y>/||s||^2, 0) * ||g_prev||^(-r).

    The correction term makes <z, s> >= nu * ||g_prev||^r * ||s||^2 > 0
    regardless of how the step was chosen.
    """
    s, y = pair.s, pair.y
    s_sq = float(np.dot(s, s))
    if s_sq <= 0.0 or pair.g_prev_norm <= 0.0:
        raise DegenerateStep("zero step or zero previous gradient")
    g_pow = pair.g_prev_norm ** r
    h = nu + max(-float(np.dot(s, y)) / s_sq, 0.0) / g_pow
    return y + (h * g_pow) * s


def dai_liao_t(s: Vector, z: Vector, p: float, q: float) -> float:
    """Conjugacy scalar t = p * ||z||^2 / <s,z> - q * <s,z> / ||s||^2."""
    sz = float(np.dot(s, z))
    if sz <= 0.0:
        raise DegenerateInnerProduct(f"<s, z> = {sz} is not positive")
    s_sq = float(np.dot(s, s))
    if s_sq <= 0.0:
        raise DegenerateInnerProduct("<s, s> = 0")
    return p * float(np.dot(z, z)) / sz - q * sz / s_sq


def beta_mddl(g_next: Vector, s: Vector, z: Vector, d: Vector, t: float) -> float:
    """Conjugate parameter beta = (<g_next,z> - t * <g_next,s>) / <d,z>.

    With t = 0 this is the Hestenes-Stiefel form with z in place of y.
    """
    dz = float(np.dot(d, z))
    if abs(dz) < DENOMINATOR_GUARD:
        raise DegenerateInnerProduct(f"<d, z> = {dz} below guard")
    return (float(np.dot(g_next, z)) - t * float(np.dot(g_next, s))) / dz


def theta_raw(g_next: Vector, s: Vector, z: Vector, t: float, variant: str) -> float:
    """Unclamped spectral parameter.

    variant "r": theta = 1 - (t - 1) * <s,g_next> / <z,g_next>
    variant "n": theta = 1 - t * <s,g_next> / <z,g_next>

    A zero denominator yields an out-of-range sentinel that
    :func:`clamp_theta` maps to the fallback value 1.
    """
    zg = float(np.dot(z, g_next))
    if zg == 0.0:
        return math.inf
    sg = float(np.dot(s, g_next))
    if variant == "r":
        return 1.0 - (t - 1.0) * sg / zg
    if variant == "n":
        return 1.0 - t * sg / zg
    raise ValueError(f"unknown theta variant {variant!r}")


def clamp_theta(theta: float, p: float, q: float, eta: float, tau: float) -> float:
    """Keep the spectral parameter inside [1/(4p) + |q| + eta, tau]; any
    out-of-range (or non-finite) value falls back to 1."""
    lower = 1.0 / (4.0 * p) + abs(q) + eta
    if lower <= theta <= tau:
        return theta
    return 1.0


def next_direction(g_next: Vector, d_prev: Vector, theta: float, beta: float) -> Vector:
    """Spectral CG recursion d_next = -theta * g_next + beta * d_prev."""
    return -theta * g_next + beta * d_prev


def beta_zdk(g_next: Vector, z: Vector, d: Vector) -> float:
    """Baseline conjugate parameter
    beta = <g_next,z>/<d,z> - (||z||^2/<d,z>) * <g_next,d>/<d,z>."""
    dz = float(np.dot(d, z))
    if abs(dz) < DENOMINATOR_GUARD:
        raise DegenerateInnerProduct(f"<d, z> = {dz} below guard")
    return (float(np.dot(g_next, z))
            - float(np.dot(z, z)) * float(np.dot(g_next, d)) / dz) / dz


def theta_mscg(g_next: Vector, z: Vector, d: Vector, p: float, q: float,
               eta: float, tau: float) -> float:
    """Baseline spectral parameter
    1 - (||z||^2/<d,z>) * <g_next,d>/<g_next,z>, clamped like
    :func:`clamp_theta` (division by zero falls back to 1)."""
    dz = float(np.dot(d, z))
    gz = float(np.dot(g_next, z))
    if abs(dz) < DENOMINATOR_GUARD or gz == 0.0:
        return 1.0
    raw = 1.0 - float(np.dot(z, z)) / dz * float(np.dot(g_next, d)) / gz
    return clamp_theta(raw, p, q, eta, tau)


def beta_hs(g_next: Vector, y: Vector, d: Vector) -> float:
    """Hestenes-Stiefel parameter <g_next,y>/<d,y>."""
    dy = float(np.dot(d, y))
    if abs(dy) < DENOMINATOR_GUARD:
        raise DegenerateInnerProduct(f"<d, y> = {dy} below guard")
    return float(np.dot(g_next, y)) / dy


def beta_hz(g_next: Vector, y: Vector, d: Vector) -> float:
    """Hager-Zhang parameter <g_next,y>/<d,y> - 2(||y||^2/<d,y>)<g_next,d>/<d,y>."""
    dy = float(np.dot(d, y))
    if abs(dy) < DENOMINATOR_GUARD:
        raise DegenerateInnerProduct(f"<d, y> = {dy} below guard")
    return (float(np.dot(g_next, y))
            - 2.0 * float(np.dot(y, y)) * float(np.dot(g_next, d)) / dy) / dy


def beta_dl(g_next: Vector, s: Vector, y: Vector, d: Vector, t: float) -> float:
    """Classical Dai-Liao parameter <g_next,y>/<d,y> - t * <g_next,s>/<d,y>."""
    dy = float(np.dot(d, y))
    if abs(dy) < DENOMINATOR_GUARD:
        raise DegenerateInnerProduct(f"<d, y> = {dy} below guard")
    return (float(np.dot(g_next, y)) - t * float(np.dot(g_next, s))) / dy


def direction_matrix(s: Vector, z: Vector, y: Vector, t: float,
                     third_denominator: str = "sy") -> np.ndarray:
    """Rank-one-update matrix Q with d_next = -Q @ g_next when theta = 1.

    Q = I - s z^T / <s,z> + t * s s^T / den, where ``den`` is <s,y> for
    ``third_denominator="sy"`` (the published mixed form) or <s,z> for
    ``"sz"``. Only the "sz" form is algebraically consistent with the beta
    recursion; the mixed form is kept for comparison.
    """
    sz = float(np.dot(s, z))
    if sz == 0.0:
        raise DegenerateInnerProduct("<s, z> = 0")
    if third_denominator == "sy":
        den = float(np.dot(s, y))
    elif third_denominator == "sz":
        den = sz
    else:
        raise ValueError(f"unknown denominator choice {third_denominator!r}")
    if den == 0.0:
        raise DegenerateInnerProduct("third-term denominator is 0")
    n = s.shape[0]
    return (np.eye(n) - np.outer(s, z) / sz + (t / den) * np.outer(s, s))


def update_direction(g_next: Vector, d_prev: Vector, pair: StepPair,
                     params: SolverParams) -> DirectionState:
    """Run the full direction update for the configured ``beta_rule``.

    The classical rules (hs, hz, dl) are non-spectral and use theta = 1.
    Raises :class:`DegenerateStep` or :class:`DegenerateInnerProduct` when
    the update is numerically impossible; the solver restarts in that case.
    """
    rule = params.beta_rule
    if rule in ("mddl", "zdk"):
        z = modified_secant_z(pair, params.r, params.nu)
        if rule == "mddl":
            t = dai_liao_t(pair.s, z, params.p, params.q)
            beta = beta_mddl(g_next, pair.s, z, d_prev, t)
            raw = theta_raw(g_next, pair.s, z, t, params.theta_variant)
            theta = clamp_theta(raw, params.p, params.q, params.eta, params.tau)
        else:
            t = math.nan
            beta = beta_zdk(g_next, z, d_prev)
            raw = math.nan
            theta = theta_mscg(g_next, z, d_prev, params.p, params.q,
                               params.eta, params.tau)
    else:
        z = pair.y
        t = params.dl_t if rule == "dl" else math.nan
        raw = math.nan
        theta = 1.0
        if rule == "hs":
            beta = beta_hs(g_next, pair.y, d_prev)
        elif rule == "hz":
            beta = beta_hz(g_next, pair.y, d_prev)
        else:
            beta = beta_dl(g_next, pair.s, pair.y, d_prev, params.dl_t)
    d_next = next_direction(g_next, d_prev, theta, beta)
    return DirectionState(z=z, t=t, beta=beta, theta_raw=raw, theta=theta,
                          d_next=d_next)
