"""Solvers: dense direct solve, fixed-point iteration for nonlinear right-hand
sides, precision-driven adaptive refinement, and a second-order
finite-difference baseline for convergence comparisons.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .assemble import apply_boundary, assemble_operator, assemble_rhs, sample_coefficient
from .errors import (ConvergenceError, EvalError, PrecisionUnreachableError,
                     ProblemError, SingularSystemError)
from .expr import Classification, OdeProblem
from .grid import Grid, chebyshev_nodes
from .interp import BarycentricInterpolant, barycentric_weights, sample_uniform

PIVOT_FLOOR = 1e-14
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100
ADAPTIVE_START = 8
ADAPTIVE_CAP = 2048
ADAPTIVE_SAMPLES = 100


@dataclass
class SolveDiagnostics:
    iterations: int
    residual_inf: float
    final_p: int
    converged: bool


@dataclass
class Solution:
    """Nodal values plus a barycentric interpolant for off-grid evaluation."""

    grid: Grid
    values: np.ndarray
    interpolant: BarycentricInterpolant
    diagnostics: SolveDiagnostics

    def __call__(self, x):
        return self.interpolant(x)


# --- dense direct solve ------------------------------------------------------

def lu_factor(a):
    """LU factorization with partial pivoting, packed LAPACK-style.

    Returns (lu, piv): the strict lower triangle of lu holds the multipliers,
    the upper triangle holds U, and piv[k] is the row swapped into position k
    at elimination step k.  A pivot below 1e-14 times the matrix infinity
    norm raises SingularSystemError naming the pivot index.
    """
    lu = np.array(a, dtype=float)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError("matrix must be square")
    n = lu.shape[0]
    scale = np.abs(lu).sum(axis=1).max()
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= PIVOT_FLOOR * scale:
            raise SingularSystemError(
                f"matrix is singular to working precision "
                f"(pivot {k} has magnitude {abs(lu[p, k]):.3e})", pivot_index=k)
        piv[k] = p
        if p != k:
            lu[[k, p]] = lu[[p, k]]
        if k < n - 1:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def lu_solve(factors, b):
    """Solve with factors from :func:`lu_factor`.

    The interchanges must be applied in full before forward substitution:
    the stored multiplier columns are in final (post-pivoting) row order.
    """
    lu, piv = factors
    x = np.array(b, dtype=float)
    n = x.size
    for k in range(n):
        p = piv[k]
        if p != k:
            x[[k, p]] = x[[p, k]]
    for k in range(n - 1):
        x[k + 1:] -= lu[k + 1:, k] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def solve_dense(a, b) -> np.ndarray:
    """Direct solve of a dense square system; never forms an inverse."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if b.shape != (a.shape[0],):
        raise ValueError(f"right-hand side shape {b.shape} does not match matrix {a.shape}")
    return lu_solve(lu_factor(a), b)


# --- boundary value problems -------------------------------------------------

def _package(grid, values, iterations, residual, converged, weights=None):
    if weights is None:
        weights = barycentric_weights(grid)
    interpolant = BarycentricInterpolant(grid.nodes, values, weights)
    diagnostics = SolveDiagnostics(iterations=iterations, residual_inf=residual,
                                   final_p=len(grid), converged=converged)
    return Solution(grid, values, interpolant, diagnostics)


def solve_bvp_linear(problem: OdeProblem, p: int) -> Solution:
    """Direct collocation solve of a linear problem on p Chebyshev points."""
    if problem.classification is not Classification.LINEAR:
        raise ProblemError(
            "problem has a nonlinear right-hand side; use solve_bvp_nonlinear")
    if p < 4:
        raise ValueError(f"need at least 4 collocation points, got {p}")
    grid = chebyshev_nodes(p, problem.domain)
    op = assemble_operator(problem.lhs_terms, grid)
    f = assemble_rhs(problem.rhs, grid)
    system = apply_boundary(op, f, problem.lvalue, problem.rvalue, grid)
    u = solve_dense(system.matrix, system.rhs)
    residual = float(np.abs((system.matrix @ u - system.rhs)[1:-1]).max())
    return _package(grid, u, iterations=1, residual=residual, converged=True)


def solve_bvp_nonlinear(problem: OdeProblem, p: int, tol: float = DEFAULT_TOL,
                        max_iter: int = DEFAULT_MAX_ITER) -> Solution:
    """Fixed-point iteration for a nonlinear right-hand side.

    Starting from the zero vector, each step solves the boundary-modified
    linear system L u = f(x, u_prev) with the operator factored once.  Stops
    when successive iterates differ by less than tol in the max norm; raises
    ConvergenceError carrying the iterate and difference history otherwise,
    including when the right-hand side stops being evaluable (divergence to
    overflow).
    """
    if problem.classification is not Classification.NONLINEAR_RHS:
        raise ProblemError(
            "right-hand side does not involve u; use solve_bvp_linear")
    if p < 4:
        raise ValueError(f"need at least 4 collocation points, got {p}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    grid = chebyshev_nodes(p, problem.domain)
    op = assemble_operator(problem.lhs_terms, grid)
    system = apply_boundary(op, np.zeros(p), problem.lvalue, problem.rvalue, grid)
    factors = lu_factor(system.matrix)

    def boundary_rhs(u_current):
        f = assemble_rhs(problem.rhs, grid, u_current=u_current)
        f[0] = problem.rvalue
        f[-1] = problem.lvalue
        return f

    u = np.zeros(p)
    history = []
    for iteration in range(1, max_iter + 1):
        try:
            f = boundary_rhs(u)
        except EvalError as exc:
            raise ConvergenceError(
                f"right-hand side became unevaluable at iteration {iteration} "
                f"(diverging iteration?): {exc}",
                last_iterate=u, history=history) from exc
        u_next = lu_solve(factors, f)
        step = float(np.abs(u_next - u).max())
        history.append(step)
        u = u_next
        if step < tol:
            f = boundary_rhs(u)
            residual = float(np.abs((system.matrix @ u - f)[1:-1]).max())
            return _package(grid, u, iterations=iteration, residual=residual,
                            converged=True)
    raise ConvergenceError(
        f"fixed-point iteration did not reach tol={tol:g} within {max_iter} "
        f"iterations (last step {history[-1]:.3e})",
        last_iterate=u, history=history)


def solve_adaptive(problem: OdeProblem, precision: float, tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER) -> Solution:
    """Double the point count from 8 until two successive solutions agree.

    Agreement is measured at 100 equispaced sample points through the
    barycentric interpolants, i.e. in function space rather than at the
    (changing) collocation nodes.  Returns the finer of the two agreeing
    solutions; raises PrecisionUnreachableError past 2048 points.
    """
    if precision <= 0.0:
        raise ValueError("precision must be positive")

    def solve_at(p):
        if problem.classification is Classification.LINEAR:
            return solve_bvp_linear(problem, p)
        return solve_bvp_nonlinear(problem, p, tol=tol, max_iter=max_iter)

    previous = solve_at(ADAPTIVE_START)
    _, prev_ys = sample_uniform(previous.interpolant, ADAPTIVE_SAMPLES, problem.domain)
    best = math.inf
    p = 2 * ADAPTIVE_START
    while p <= ADAPTIVE_CAP:
        current = solve_at(p)
        _, ys = sample_uniform(current.interpolant, ADAPTIVE_SAMPLES, problem.domain)
        difference = float(np.abs(ys - prev_ys).max())
        best = min(best, difference)
        if difference < precision:
            return current
        previous, prev_ys = current, ys
        p *= 2
    raise PrecisionUnreachableError(
        f"precision {precision:g} not reached at {ADAPTIVE_CAP} points "
        f"(best successive difference {best:.3e})", best_difference=best)


# --- finite-difference baseline ----------------------------------------------

def _equispaced_weights(m):
    """Barycentric weights for an equispaced grid: (-1)^j binomial(m-1, j).

    Computed in log space and normalised to unit maximum.  For large m the
    end weights underflow (the Runge phenomenon showing up in the
    representation), so this interpolant is only trustworthy at and near
    the nodes; the baseline's results are read nodally anyway.
    """
    n = m - 1
    logc = np.array([math.lgamma(n + 1) - math.lgamma(j + 1) - math.lgamma(n - j + 1)
                     for j in range(m)])
    return (-1.0) ** np.arange(m) * np.exp(logc - logc.max())


def solve_fd_baseline(problem: OdeProblem, m: int) -> Solution:
    """Second-order central differences on m equispaced points.

    The algebraic O(m^-2) baseline against which spectral convergence is
    compared.  Uses the same descending node order and row-replacement
    boundary treatment as the spectral path; the tridiagonal system is
    solved with a banded factorization.
    """
    if problem.classification is not Classification.LINEAR:
        raise ProblemError("the finite-difference baseline handles linear problems only")
    if m < 4:
        raise ValueError(f"need at least 4 grid points, got {m}")
    domain = problem.domain
    grid = Grid(domain, np.linspace(domain.b, domain.a, m))
    h = domain.length / (m - 1)

    coeffs = {order: np.zeros(m) for order in (0, 1, 2)}
    for term in problem.lhs_terms:
        coeffs[term.order] += sample_coefficient(term, grid)

    # Descending nodes: x[i-1] = x[i] + h, so the i-1 neighbour is the
    # "plus h" sample in the central stencils.
    lower = coeffs[2] / h**2 + coeffs[1] / (2.0 * h)   # A[i, i-1]
    diag = -2.0 * coeffs[2] / h**2 + coeffs[0]         # A[i, i]
    upper = coeffs[2] / h**2 - coeffs[1] / (2.0 * h)   # A[i, i+1]

    banded = np.zeros((3, m))
    banded[0, 2:] = upper[1:-1]
    banded[1, 1:-1] = diag[1:-1]
    banded[1, 0] = banded[1, -1] = 1.0
    banded[2, :m - 2] = lower[1:-1]

    f = assemble_rhs(problem.rhs, grid)
    f[0] = problem.rvalue
    f[-1] = problem.lvalue
    try:
        u = scipy.linalg.solve_banded((1, 1), banded, f)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"finite-difference system is singular: {exc}") from exc
    if not np.isfinite(u).all():
        raise SingularSystemError("finite-difference system is singular (non-finite solution)")

    residual = float(np.abs(
        lower[1:-1] * u[:-2] + diag[1:-1] * u[1:-1] + upper[1:-1] * u[2:] - f[1:-1]).max())
    return _package(grid, u, iterations=1, residual=residual, converged=True,
                    weights=_equispaced_weights(m))
