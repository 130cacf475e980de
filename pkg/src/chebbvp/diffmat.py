"""Dense Chebyshev differentiation matrices.

Off-diagonal entries follow the classical formula (Trefethen, *Spectral
Methods in MATLAB*, ch. 6),

    D_ij = (c_i / c_j) * (-1)**(i+j) / (x_i - x_j),    i != j,

with c = 2 at the two endpoints and 1 in the interior.  Diagonal entries
use the negative-sum trick, D_ii = -sum_{j != i} D_ij, so constants
differentiate to (numerical) zero by construction.  Higher derivative
orders are matrix powers of the first-order matrix.
"""

from dataclasses import dataclass

import numpy as np

from .grid import Domain, Grid, reference_nodes


@dataclass(frozen=True)
class DiffMatrix:
    """Spectral differentiation matrix of a given derivative order."""

    order: int
    entries: np.ndarray
    domain: Domain

    @property
    def p(self):
        return self.entries.shape[0]


def first_derivative_matrix(grid: Grid) -> DiffMatrix:
    """First-order differentiation matrix on the grid's domain.

    Built on the reference nodes and scaled by the chain-rule factor
    2/(b - a); the diagonal is filled after scaling so row sums vanish on
    every domain, not just [-1, 1].
    """
    p = len(grid)
    t = reference_nodes(p)
    c = np.ones(p)
    c[0] = c[-1] = 2.0
    cs = c * (-1.0) ** np.arange(p)
    dt = t[:, None] - t[None, :]
    np.fill_diagonal(dt, 1.0)
    d = np.outer(cs, 1.0 / cs) / dt
    np.fill_diagonal(d, 0.0)
    d *= 2.0 / grid.domain.length
    np.fill_diagonal(d, -d.sum(axis=1))
    return DiffMatrix(1, d, grid.domain)


def derivative_matrix(grid: Grid, k: int) -> DiffMatrix:
    """Differentiation matrix of order k, as the k-th power of the
    first-order matrix.  Requires 1 <= k <= p - 1."""
    p = len(grid)
    if not 1 <= k <= p - 1:
        raise ValueError(f"derivative order must lie in [1, {p - 1}], got {k}")
    first = first_derivative_matrix(grid)
    if k == 1:
        return first
    return DiffMatrix(k, np.linalg.matrix_power(first.entries, k), grid.domain)
