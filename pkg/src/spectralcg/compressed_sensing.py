"""Sparse signal recovery via a Huber-smoothed l1-regularized least-squares
objective, with instance generation, a recovery driver, and error metrics."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .core import CallableProblem, SolveResult, SolverParams, Vector, inf_norm
from .solver import StoppingRule, minimize

MSE_TOLERANCE = 1e-5


class ZeroReference(Exception):
    """Relative error against a zero reference signal is undefined."""


@dataclass(frozen=True)
class CsInstance:
    """An underdetermined recovery problem: measurements b = A x_true + w
    with an m-by-n Gaussian sensing matrix (m < n) and k-sparse x_true."""

    A: np.ndarray
    b: Vector
    x_true: Vector
    k: int
    mu: float
    lam: float
    seed: int

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def __post_init__(self):
        if self.A.ndim != 2 or self.m >= self.n:
            raise ValueError("A must be m-by-n with m < n")
        if self.b.shape[0] != self.m or self.x_true.shape[0] != self.n:
            raise ValueError("b and x_true must match A's shape")
        if int(np.count_nonzero(self.x_true)) != self.k:
            raise ValueError("x_true must have exactly k nonzeros")
        if self.mu < 0.0 or self.lam < 0.0 or (self.mu > 0.0 and self.lam == 0.0):
            raise ValueError("need mu >= 0, lam >= 0, and lam > 0 whenever mu > 0")


def huber_value(u: float, lam: float) -> float:
    """u^2/(2*lam) below the threshold, |u| - lam/2 above; continuous at |u| = lam."""
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    au = abs(u)
    if au < lam:
        return u * u / (2.0 * lam)
    return au - lam / 2.0


def huber_grad_component(u: float, lam: float) -> float:
    """Derivative of :func:`huber_value`: u/lam below the threshold, sign(u)
    above. Bounded by 1 in magnitude and (1/lam)-Lipschitz."""
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    if abs(u) < lam:
        return u / lam
    return float(np.sign(u))


def _huber_value_vec(x: Vector, lam: float) -> float:
    ax = np.abs(x)
    small = ax < lam
    return float(np.sum(np.where(small, x * x / (2.0 * lam), ax - lam / 2.0)))


def _huber_grad_vec(x: Vector, lam: float) -> Vector:
    return np.where(np.abs(x) < lam, x / lam, np.sign(x))


def smoothed_objective(inst: CsInstance, x: Vector) -> tuple[float, Vector]:
    """Value and gradient of f(x) = 1/2 ||Ax - b||^2 + mu * sum_i huber(|x_i|).

    The gradient is A^T(Ax - b) + mu * huber'(x) componentwise; the penalty
    gradient carries the same coefficient mu as the penalty itself. A^T A is
    never formed: each call costs two matrix-vector products.
    """
    resid = inst.A @ x - inst.b
    value = 0.5 * float(np.dot(resid, resid))
    grad = inst.A.T @ resid
    if inst.mu > 0.0:
        value += inst.mu * _huber_value_vec(x, inst.lam)
        grad = grad + inst.mu * _huber_grad_vec(x, inst.lam)
    return value, grad


def _as_problem(inst: CsInstance) -> CallableProblem:
    def value(x):
        resid = inst.A @ x - inst.b
        v = 0.5 * float(np.dot(resid, resid))
        if inst.mu > 0.0:
            v += inst.mu * _huber_value_vec(x, inst.lam)
        return v

    def gradient(x):
        return smoothed_objective(inst, x)[1]

    return CallableProblem(inst.n, value, gradient)


def generate_instance(m: int, n: int, k: int, seed: int,
                      noise_scale: float = 0.01,
                      mu_floor: bool = False) -> CsInstance:
    """Draw a recovery instance: standard-normal A, k-sparse standard-normal
    x_true on a uniformly random support, noise w = noise_scale * normal,
    b = A x_true + w. The smoothing weights are
    mu = 0.001 * ||A^T b||_inf (with an optional 2^-7 floor) and
    lam = min(0.001, 0.048 * ||A^T b||_inf). Deterministic per seed.

    The default noise scale keeps the absolute recovery target (mean squared
    error 1e-5 against a unit-scale signal) reachable: mu grows with the
    measurement magnitudes while the noise-correlation level it must dominate
    grows with the absolute noise, so noise much above ~0.01 leaves every
    choice of mu either under-suppressing noise components or over-biasing
    signal components."""
    if not (0 <= k < m < n):
        raise ValueError("need 0 <= k < m < n")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    x_true = np.zeros(n)
    if k > 0:
        support = rng.choice(n, size=k, replace=False)
        x_true[support] = rng.standard_normal(k)
    w = noise_scale * rng.standard_normal(m)
    b = A @ x_true + w
    atb_inf = inf_norm(A.T @ b) if np.any(b) else 0.0
    mu = 0.001 * atb_inf
    if mu_floor:
        mu = max(2.0 ** -7, mu)
    lam = min(0.001, 0.048 * atb_inf)
    return CsInstance(A=A, b=b, x_true=x_true, k=int(np.count_nonzero(x_true)),
                      mu=mu, lam=lam, seed=seed)


def mse(x: Vector, x_ref: Vector) -> float:
    """Mean squared error (1/n) * sum (x_i - x_ref_i)^2."""
    if x.shape != x_ref.shape:
        raise ValueError("length mismatch")
    diff = x - x_ref
    return float(np.dot(diff, diff)) / x.shape[0]


def rel_err(x_recovered: Vector, x_true: Vector) -> float:
    """Relative error ||x_recovered - x_true|| / ||x_true||."""
    ref_norm = float(np.linalg.norm(x_true))
    if ref_norm == 0.0:
        raise ZeroReference("reference signal has zero norm")
    return float(np.linalg.norm(x_recovered - x_true)) / ref_norm


def recover(inst: CsInstance, params: SolverParams = SolverParams(),
            mse_tolerance: float = MSE_TOLERANCE,
            store_iterates: bool = True) -> SolveResult:
    """Run the solver on the smoothed objective from x0 = A^T b, stopping
    when MSE against the true signal drops to ``mse_tolerance``.

    The result metadata carries the final "mse" and "rel_err" plus, when
    iterates are stored, the per-iteration "mse_series" and
    "rel_err_series" (entry i is the error after iteration i+1)."""
    problem = _as_problem(inst)
    x0 = inst.A.T @ inst.b
    stop = StoppingRule.custom(lambda x, trace: mse(x, inst.x_true) <= mse_tolerance)
    result = minimize(problem, x0, params, stop, store_iterates=store_iterates)
    result.metadata["mse"] = mse(result.final_x, inst.x_true)
    has_ref = float(np.linalg.norm(inst.x_true)) > 0.0
    result.metadata["rel_err"] = (rel_err(result.final_x, inst.x_true)
                                  if has_ref else None)
    if result.iterates is not None:
        result.metadata["mse_series"] = [mse(x, inst.x_true)
                                         for x in result.iterates[1:]]
        result.metadata["rel_err_series"] = [
            rel_err(x, inst.x_true) if has_ref else None
            for x in result.iterates[1:]]
    return result


def save_instance(inst: CsInstance, path) -> None:
    """Write an instance as JSON: {m, n, k, seed, A row-major, b, x_true, mu, lambda}."""
    doc = {"m": inst.m, "n": inst.n, "k": inst.k, "seed": inst.seed,
           "A": inst.A.ravel(order="C").tolist(),
           "b": inst.b.tolist(), "x_true": inst.x_true.tolist(),
           "mu": inst.mu, "lambda": inst.lam}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_instance(path) -> CsInstance:
    with open(path) as fh:
        doc = json.load(fh)
    m, n = doc["m"], doc["n"]
    A = np.asarray(doc["A"], dtype=np.float64).reshape((m, n), order="C")
    return CsInstance(A=A, b=np.asarray(doc["b"], dtype=np.float64),
                      x_true=np.asarray(doc["x_true"], dtype=np.float64),
                      k=doc["k"], mu=doc["mu"], lam=doc["lambda"],
                      seed=doc["seed"])


def write_recovery_csv(inst: CsInstance, x_recovered: Vector, path) -> None:
    """Dump (index, true, recovered) rows for signal-recovery plots."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "true", "recovered"])
        for i in range(inst.n):
            writer.writerow([i, repr(float(inst.x_true[i])),
                             repr(float(x_recovered[i]))])
