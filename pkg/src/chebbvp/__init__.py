"""Chebyshev spectral collocation for second-order two-point boundary value
problems: an expression language for writing the ODE, dense differentiation
matrices, direct and fixed-point solvers, and barycentric interpolants of
the solution.
"""

from .errors import (ChebBvpError, ConvergenceError, EvalError, ParseError,
                     PrecisionUnreachableError, ProblemError, SingularSystemError)
from .grid import Domain, Grid, chebyshev_nodes, from_reference, reference_nodes, to_reference
from .diffmat import DiffMatrix, derivative_matrix, first_derivative_matrix
from .expr import (Classification, LhsTerm, OdeProblem, classify, evaluate,
                   extract_lhs_terms, make_problem, mentions_u, parse)
from .assemble import CollocationSystem, apply_boundary, assemble_operator, assemble_rhs
from .interp import BarycentricInterpolant, barycentric_weights, eval_at, sample_uniform
from .solve import (Solution, SolveDiagnostics, solve_adaptive, solve_bvp_linear,
                    solve_bvp_nonlinear, solve_dense, solve_fd_baseline)

__version__ = "0.1.0"

__all__ = [
    "BarycentricInterpolant",
    "ChebBvpError",
    "Classification",
    "CollocationSystem",
    "ConvergenceError",
    "DiffMatrix",
    "Domain",
    "EvalError",
    "Grid",
    "LhsTerm",
    "OdeProblem",
    "ParseError",
    "PrecisionUnreachableError",
    "ProblemError",
    "SingularSystemError",
    "Solution",
    "SolveDiagnostics",
    "apply_boundary",
    "assemble_operator",
    "assemble_rhs",
    "barycentric_weights",
    "chebyshev_nodes",
    "classify",
    "derivative_matrix",
    "eval_at",
    "evaluate",
    "extract_lhs_terms",
    "first_derivative_matrix",
    "from_reference",
    "make_problem",
    "mentions_u",
    "parse",
    "reference_nodes",
    "sample_uniform",
    "solve_adaptive",
    "solve_bvp_linear",
    "solve_bvp_nonlinear",
    "solve_dense",
    "solve_fd_baseline",
    "to_reference",
]
