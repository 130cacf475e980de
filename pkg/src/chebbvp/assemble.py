"""Collocation operator assembly and Dirichlet boundary application.

The left-hand side L = sum_k diag(coeff_k(x_j)) D^k acts on nodal values;
D^0 is the identity.  Dirichlet conditions are enforced by row replacement:
the two boundary rows become unit rows and the matching right-hand side
entries carry the boundary values.
"""

from dataclasses import dataclass

import numpy as np

from .diffmat import derivative_matrix
from .errors import EvalError
from .expr import Expr, evaluate
from .grid import Grid


@dataclass(frozen=True)
class CollocationSystem:
    """Boundary-modified dense system L u = f on a grid."""

    matrix: np.ndarray
    rhs: np.ndarray
    grid: Grid


def sample_coefficient(term, grid: Grid) -> np.ndarray:
    """Evaluate a term's x-only coefficient at every grid node."""
    out = np.empty(len(grid))
    for j, x in enumerate(grid.nodes):
        try:
            out[j] = evaluate(term.coefficient, float(x))
        except EvalError as exc:
            raise EvalError(
                f"coefficient of diff(u,{term.order}) failed at node {j} "
                f"(x = {x:.17g}): {exc}", x=float(x)) from exc
    if not np.isfinite(out).all():
        j = int(np.flatnonzero(~np.isfinite(out))[0])
        raise EvalError(
            f"coefficient of diff(u,{term.order}) is not finite at node {j} "
            f"(x = {grid.nodes[j]:.17g})", x=float(grid.nodes[j]))
    return out


def assemble_operator(lhs_terms, grid: Grid) -> np.ndarray:
    """Dense collocation operator for the given LHS terms."""
    p = len(grid)
    op = np.zeros((p, p))
    for term in lhs_terms:
        coeff = sample_coefficient(term, grid)
        basis = np.eye(p) if term.order == 0 else derivative_matrix(grid, term.order).entries
        op += coeff[:, None] * basis  # diag(coeff) @ D^k
    return op


def assemble_rhs(rhs: Expr, grid: Grid, u_current=None) -> np.ndarray:
    """Sample the right-hand side at the nodes, binding u for nonlinear
    problems."""
    if u_current is not None and len(u_current) != len(grid):
        raise ValueError(
            f"u_current has length {len(u_current)}, expected {len(grid)}")
    out = np.empty(len(grid))
    for j, x in enumerate(grid.nodes):
        u_j = None if u_current is None else float(u_current[j])
        try:
            out[j] = evaluate(rhs, float(x), u_j)
        except EvalError as exc:
            raise EvalError(
                f"right-hand side failed at node {j} (x = {x:.17g}): {exc}",
                x=float(x)) from exc
    if not np.isfinite(out).all():
        j = int(np.flatnonzero(~np.isfinite(out))[0])
        raise EvalError(
            f"right-hand side is not finite at node {j} (x = {grid.nodes[j]:.17g})",
            x=float(grid.nodes[j]))
    return out


def apply_boundary(op, f, lvalue: float, rvalue: float, grid: Grid) -> CollocationSystem:
    """Replace the boundary rows by unit rows and pin the boundary values.

    Nodes run from b down to a, so row 0 carries rvalue and row p-1 carries
    lvalue.  Inputs are copied; applying twice is a no-op.
    """
    matrix = np.array(op, dtype=float)
    rhs = np.array(f, dtype=float)
    matrix[0, :] = 0.0
    matrix[0, 0] = 1.0
    matrix[-1, :] = 0.0
    matrix[-1, -1] = 1.0
    rhs[0] = rvalue
    rhs[-1] = lvalue
    return CollocationSystem(matrix, rhs, grid)
