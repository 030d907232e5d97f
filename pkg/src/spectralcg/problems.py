"""Benchmark objectives: the Beale function and a perturbed-quadratic family."""

from __future__ import annotations

import json
import math

import numpy as np

from .core import Problem, Vector, as_vector


class SingularMatrix(Exception):
    """The quadratic's matrix is not invertible."""


class BealeProblem(Problem):
    """f(x, y) = (1.5 - x + xy)^2 + (2.25 - x + xy^2)^2 + (2.625 - x + xy^3)^2.
    Global minimum f(3, 0.5) = 0."""

    @property
    def dimension(self) -> int:
        return 2

    def value(self, v: Vector) -> float:
        x, y = v[0], v[1]
        r1 = 1.5 - x + x * y
        r2 = 2.25 - x + x * y * y
        r3 = 2.625 - x + x * y ** 3
        return r1 * r1 + r2 * r2 + r3 * r3

    def gradient(self, v: Vector) -> Vector:
        x, y = v[0], v[1]
        r1 = 1.5 - x + x * y
        r2 = 2.25 - x + x * y * y
        r3 = 2.625 - x + x * y ** 3
        gx = 2.0 * (r1 * (y - 1.0) + r2 * (y * y - 1.0) + r3 * (y ** 3 - 1.0))
        gy = 2.0 * x * (r1 + 2.0 * y * r2 + 3.0 * y * y * r3)
        return np.array([gx, gy])


def beale() -> BealeProblem:
    """The two-dimensional Beale test function."""
    return BealeProblem()


class QuadraticProblem(Problem):
    """f(x) = 1/2 x^T A x + b^T x with symmetric positive definite A.

    ``A`` may be a 1-D array (interpreted as a diagonal matrix) or a full
    2-D symmetric matrix. The unique minimizer is -A^{-1} b.
    """

    def __init__(self, A, b):
        A = np.asarray(A, dtype=np.float64)
        self.b = as_vector(b)
        if A.ndim == 1:
            if A.shape[0] != self.b.shape[0]:
                raise ValueError("diagonal and b must have the same length")
            if not np.all(A > 0.0):
                raise ValueError("diagonal entries must be positive")
            self.diag = A
            self.matrix = None
        elif A.ndim == 2:
            if A.shape[0] != A.shape[1] or A.shape[0] != self.b.shape[0]:
                raise ValueError("A must be square and match b")
            if not np.allclose(A, A.T, rtol=1e-12, atol=0.0):
                raise ValueError("A must be symmetric")
            try:
                np.linalg.cholesky(A)
            except np.linalg.LinAlgError as exc:
                raise ValueError("A must be positive definite") from exc
            self.diag = None
            self.matrix = A
        else:
            raise ValueError("A must be 1-D (diagonal) or 2-D")

    @property
    def dimension(self) -> int:
        return self.b.shape[0]

    def _ax(self, x: Vector) -> Vector:
        if self.diag is not None:
            return self.diag * x
        return self.matrix @ x

    def value(self, x: Vector) -> float:
        # Exactly-rounded summation: near the minimum the per-step decrease
        # is a few ulps of f, which naive dot products round away.
        terms = x * (0.5 * self._ax(x) + self.b)
        return math.fsum(terms)

    def gradient(self, x: Vector) -> Vector:
        return self._ax(x) + self.b

    def to_json(self) -> str:
        """Serialize a diagonal instance as {"dim": ..., "a": [...], "b": [...]}."""
        if self.diag is None:
            raise ValueError("only diagonal instances have a JSON form")
        return json.dumps({"dim": self.dimension,
                           "a": self.diag.tolist(),
                           "b": self.b.tolist()})

    @classmethod
    def from_json(cls, doc: str) -> "QuadraticProblem":
        data = json.loads(doc)
        p = cls(np.asarray(data["a"], dtype=np.float64),
                np.asarray(data["b"], dtype=np.float64))
        if p.dimension != data["dim"]:
            raise ValueError("dim field disagrees with array lengths")
        return p


_APQ25_DIAG = (2, 4, 3, 6, 4, 12, 8, 10, 5, 8, 6, 11, 4,
               8, 3, 6, 2, 12, 6, 8, 4, 10, 5, 2, 6)
_APQ25_B = (-4, -52, -18, -60, -24, -72, -72, -50, -55, -80, -78, -22, -12,
            -80, -27, -42, -24, -120, -30, -120, -24, -100, -60, -20, -66)


def apq_fixed25() -> QuadraticProblem:
    """The fixed 25-dimensional perturbed-quadratic instance."""
    return QuadraticProblem(np.array(_APQ25_DIAG, dtype=np.float64),
                            np.array(_APQ25_B, dtype=np.float64))


def apq_random(dim: int, seed: int) -> QuadraticProblem:
    """Random diagonal instance: diagonal entries uniform on [0.5, 10.5]
    (bounded away from zero, so A is positive definite), perturbation
    entries uniform on [-10, 0]. Deterministic per seed (PCG64 stream)."""
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.5, 10.5, size=dim)
    b = rng.uniform(-10.0, 0.0, size=dim)
    return QuadraticProblem(a, b)


def analytic_minimizer(p: QuadraticProblem) -> Vector:
    """The closed-form minimizer -A^{-1} b."""
    if p.diag is not None:
        if np.any(p.diag == 0.0):
            raise SingularMatrix("zero diagonal entry")
        return -p.b / p.diag
    try:
        return np.linalg.solve(p.matrix, -p.b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
