"""Exponential quadrature rules for linear parabolic problems with Dirichlet data."""

from .harness import ConvergenceRecord, emit_csv, estimate_order, run_convergence
from .integrators import IntegratorConfig, State, Stepper, classical_step, corrected_step, integrate
from .phi import PhiEvaluator, phi_apply, phi_scalar
from .problems import Problem, make_problem, trace_from_data
from .quadrature import (
    QuadratureRule,
    custom_rule,
    exactness_degree,
    lagrange_coefficients,
    make_rule,
    weights_at_zero,
)
from .space import SpaceDiscretization, discrete_norm, finite_difference, lgl_collocation, restrict

__all__ = [
    "ConvergenceRecord",
    "IntegratorConfig",
    "PhiEvaluator",
    "Problem",
    "QuadratureRule",
    "SpaceDiscretization",
    "State",
    "Stepper",
    "classical_step",
    "corrected_step",
    "custom_rule",
    "discrete_norm",
    "emit_csv",
    "estimate_order",
    "exactness_degree",
    "finite_difference",
    "integrate",
    "lagrange_coefficients",
    "lgl_collocation",
    "make_problem",
    "make_rule",
    "phi_apply",
    "phi_scalar",
    "restrict",
    "run_convergence",
    "trace_from_data",
    "weights_at_zero",
]

__version__ = "0.1.0"
