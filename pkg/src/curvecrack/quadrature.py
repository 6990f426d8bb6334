"""Discretization grid and quadrature rules for the collocation scheme.

The density integrals are discretized on N+1 equispaced nodes including
both crack tips, tau_k = l*k/N, with the flat weight l/(N+1).  Collocation
happens at the cell midpoints s_j = (2j-1)*l/(2N), which interlace the
nodes so the Cauchy kernel is never sampled at its pole.  The weight
l/(N+1) (rather than l/N) is kept exactly as in the reference scheme;
the principal-value oracle below quantifies its accuracy.

Discrete Cauchy sums are rational in s0, so their s0-derivatives used by
the integro-differential system are exact: 1/(tau-s0) differentiates to
1/(tau-s0)^2 and 2/(tau-s0)^3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Discretization:
    """Node/collocation layout of the dense 2N+2 collocation system."""

    N: int
    length: float

    def __post_init__(self):
        if self.N < 4:
            raise ValueError(f"polynomial degree N must be at least 4, got {self.N}")
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")

    @property
    def nodes(self) -> np.ndarray:
        """Quadrature nodes tau_k = l*k/N, k = 0..N (tips included)."""
        return self.length * np.arange(self.N + 1) / self.N

    @property
    def weight(self) -> float:
        """Flat quadrature weight l/(N+1)."""
        return self.length / (self.N + 1)

    @property
    def collocation_points(self) -> np.ndarray:
        """Midpoints s_j = (2j-1)*l/(2N), j = 1..N."""
        j = np.arange(1, self.N + 1)
        return (2 * j - 1) * self.length / (2 * self.N)


def pv_cauchy_sum(values, nodes, weight, s0, order: int = 0, on_node: str = "raise"):
    """Discrete principal-value Cauchy sum and its s0-derivatives.

    order 0: w * sum values_k / (tau_k - s0)
    order 1: w * sum values_k / (tau_k - s0)^2
    order 2: w * sum 2 * values_k / (tau_k - s0)^3

    When s0 coincides exactly with a node, on_node selects the behavior:
    "drop" omits that node (the symmetric-limit principal value, valid for
    order 0 only), "raise" rejects the evaluation point.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values)
    d = nodes - s0
    hit = d == 0.0
    if hit.any():
        if on_node == "drop" and order == 0:
            keep = ~hit
            return weight * np.sum(values[keep] / d[keep])
        raise ValueError(f"evaluation point {s0} coincides with a quadrature node")
    if order == 0:
        return weight * np.sum(values / d)
    if order == 1:
        return weight * np.sum(values / d**2)
    if order == 2:
        return weight * np.sum(2.0 * values / d**3)
    raise ValueError(f"unsupported derivative order {order}")


def gauss_legendre(n: int, a: float, b: float):
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def integrate_smooth(f, a: float, b: float, panels: int = 8, order: int = 24):
    """Composite Gauss-Legendre integration of a smooth (complex) integrand."""
    if b == a:
        return 0.0 + 0.0j
    total = 0.0 + 0.0j
    edges = np.linspace(a, b, panels + 1)
    for left, right in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(order, left, right)
        total += np.sum(w * f(x))
    return total


def pv_polynomial(coeffs, length: float, s0: float) -> complex:
    """Exact principal value of int_0^l p(s)/(s - s0) ds for a polynomial p.

    p is given by coefficients in the centered basis (s - l/2)^k.  Writing
    x = s - l/2 and x0 = s0 - l/2,

        PV int x^k/(x - x0) dx = sum_{i even, i<k} x0^(k-1-i) * 2 L^(i+1)/(i+1)
                                 + x0^k * log((l - s0)/s0),   L = l/2.

    Expanding this way (difference quotient plus log term) keeps every term
    bounded by L^k; the binomial expansion about s0 cancels catastrophically
    for high degree and is not used.
    """
    coeffs = np.asarray(coeffs)
    if not 0.0 < s0 < length:
        raise ValueError(f"s0 must lie strictly inside (0, {length}), got {s0}")
    half = 0.5 * length
    x0 = s0 - half
    log_term = np.log((length - s0) / s0)
    kmax = len(coeffs) - 1

    # powers of x0 up to kmax
    x0p = x0 ** np.arange(kmax + 1)
    total = 0.0 + 0.0j
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        val = x0p[k] * log_term
        for i in range(0, k, 2):
            val += x0p[k - 1 - i] * 2.0 * half ** (i + 1) / (i + 1)
        total += c * val
    return total
