"""Spectral conjugate gradient methods built on a modified secant condition,
with benchmark problems and a sparse-recovery application."""

from .core import (CallableProblem, IterationRecord, Problem, SolveResult,
                   SolverParams, Vector, as_vector, inf_norm, validate_params)
from .directions import (DegenerateInnerProduct, DegenerateStep,
                         DirectionState, StepPair, beta_dl, beta_hs, beta_hz,
                         beta_mddl, beta_zdk, clamp_theta, dai_liao_t,
                         direction_matrix, modified_secant_z, next_direction,
                         theta_mscg, theta_raw, update_direction)
from .linesearch import (LineSearchOutcome, MaxEvaluationsExceeded,
                         NotDescentDirection, strong_wolfe)
from .problems import (BealeProblem, QuadraticProblem, SingularMatrix,
                       analytic_minimizer, apq_fixed25, apq_random, beale)
from .compressed_sensing import (CsInstance, ZeroReference, generate_instance,
                                 huber_grad_component, huber_value,
                                 load_instance, mse, recover, rel_err,
                                 save_instance, smoothed_objective,
                                 write_recovery_csv)
from .solver import NonFiniteValue, StoppingRule, minimize, restart_direction

__version__ = "0.1.0"

__all__ = [
    "CallableProblem", "IterationRecord", "Problem", "SolveResult",
    "SolverParams", "Vector", "as_vector", "inf_norm", "validate_params",
    "DegenerateInnerProduct", "DegenerateStep", "DirectionState", "StepPair",
    "beta_dl", "beta_hs", "beta_hz", "beta_mddl", "beta_zdk", "clamp_theta",
    "dai_liao_t", "direction_matrix", "modified_secant_z", "next_direction",
    "theta_mscg", "theta_raw", "update_direction",
    "LineSearchOutcome", "MaxEvaluationsExceeded", "NotDescentDirection",
    "strong_wolfe",
    "BealeProblem", "QuadraticProblem", "SingularMatrix",
    "analytic_minimizer", "apq_fixed25", "apq_random", "beale",
    "CsInstance", "ZeroReference", "generate_instance",
    "huber_grad_component", "huber_value", "load_instance", "mse", "recover",
    "rel_err", "save_instance", "smoothed_objective", "write_recovery_csv",
    "NonFiniteValue", "StoppingRule", "minimize", "restart_direction",
    "__version__",
]
