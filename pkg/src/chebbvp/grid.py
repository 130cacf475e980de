"""Chebyshev collocation grids on arbitrary intervals.

Nodes are Chebyshev points of the second kind, x_j = cos(j*pi/n) with
n = p - 1, stored in descending order (x_0 = b down to x_{p-1} = a).  All
other modules rely on this ordering.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Domain:
    """Closed interval [a, b] with a < b, both finite."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise ValueError("domain endpoints must be finite")
        if not a < b:
            raise ValueError(f"domain endpoints must satisfy a < b, got [{a}, {b}]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self):
        return self.b - self.a


@dataclass(frozen=True)
class Grid:
    """Collocation nodes on a domain, strictly decreasing from b to a."""

    domain: Domain
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("a grid needs at least two nodes")
        if not (np.diff(nodes) < 0.0).all():
            raise ValueError("grid nodes must be strictly decreasing")
        if nodes[0] != self.domain.b or nodes[-1] != self.domain.a:
            raise ValueError("grid endpoints must equal the domain endpoints exactly")

    def __len__(self):
        return self.nodes.size


def reference_nodes(p: int) -> np.ndarray:
    """Chebyshev points on [-1, 1], descending.

    Evaluated in the sine form sin(pi*(n - 2j)/(2n)), which agrees with
    cos(j*pi/n) to rounding but is exactly antisymmetric in floating point,
    so node pairs x_j, x_{p-1-j} cancel to exactly zero.
    """
    if p < 2:
        raise ValueError(f"point count must be at least 2, got {p}")
    n = p - 1
    return np.sin(0.5 * np.pi * np.arange(n, -n - 1, -2) / n)


def chebyshev_nodes(p: int, domain: Domain) -> Grid:
    """Build the p-point Chebyshev collocation grid on [a, b].

    Endpoints are clamped to exactly a and b; boundary rows of a collocation
    system must hit the boundary exactly.
    """
    t = reference_nodes(p)
    x = 0.5 * domain.length * t + 0.5 * (domain.a + domain.b)
    x[0] = domain.b
    x[-1] = domain.a
    return Grid(domain, x)


def to_reference(x: float, domain: Domain) -> float:
    """Affine map from [a, b] onto the reference interval [-1, 1]."""
    return (2.0 * x - domain.a - domain.b) / (domain.b - domain.a)


def from_reference(t: float, domain: Domain) -> float:
    """Inverse of :func:`to_reference`."""
    return 0.5 * (domain.b - domain.a) * t + 0.5 * (domain.a + domain.b)
