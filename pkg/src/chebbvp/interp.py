"""Barycentric Lagrange interpolation on Chebyshev grids.

Evaluation uses the second (true) barycentric formula

    p(x) = sum_j (w_j u_j / (x - x_j)) / sum_j (w_j / (x - x_j)),

see Berrut & Trefethen, SIAM Review 46 (2004).  On a Chebyshev grid the
weights have the closed form w_j = (-1)^j, halved at the two endpoints;
any common rescaling of the weights cancels out of the formula.
"""

from dataclasses import dataclass

import numpy as np

from .grid import Domain, Grid


@dataclass(frozen=True)
class BarycentricInterpolant:
    """Node/value/weight triple for stable off-grid evaluation."""

    nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        for name, arr in (("nodes", nodes), ("values", values), ("weights", weights)):
            object.__setattr__(self, name, arr)
        if not nodes.shape == values.shape == weights.shape or nodes.ndim != 1:
            raise ValueError("nodes, values and weights must share one length")
        if nodes.size < 2:
            raise ValueError("an interpolant needs at least two nodes")

    def __call__(self, x):
        xs = np.asarray(x, dtype=float)
        if xs.ndim == 0:
            return float(_evaluate(self, xs.reshape(1))[0])
        return _evaluate(self, xs)


def barycentric_weights(grid: Grid) -> np.ndarray:
    """Closed-form Chebyshev weights: alternating signs, endpoints halved."""
    p = len(grid)
    w = np.ones(p)
    w[0] = w[-1] = 0.5
    w[1::2] *= -1.0
    return w


def _evaluate(itp, xs):
    """Second barycentric formula, vectorised over query points.

    Query points that coincide exactly with a node bypass the formula
    (which would divide by zero there) and return the stored value.
    """
    diffs = xs[:, None] - itp.nodes[None, :]
    hit_row, hit_col = np.nonzero(diffs == 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = itp.weights / diffs
        out = (ratios @ itp.values) / ratios.sum(axis=1)
    out[hit_row] = itp.values[hit_col]
    return out


def eval_at(itp: BarycentricInterpolant, x: float) -> float:
    """Evaluate the interpolant at a single point (extrapolation allowed)."""
    return itp(float(x))


def sample_uniform(itp: BarycentricInterpolant, m: int, domain: Domain):
    """Evaluate at m equispaced points spanning [a, b] inclusive.

    Returns (xs, ys) with xs ascending.
    """
    if m < 2:
        raise ValueError(f"need at least 2 sample points, got {m}")
    xs = np.linspace(domain.a, domain.b, m)
    return xs, itp(xs)
