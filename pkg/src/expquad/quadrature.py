"""Interpolatory node sets and the coefficient matrices of exponential quadrature rules.

A rule with nodes ``c_1..c_s`` in [0, 1] is stored through the matrix ``a``
whose row ``i`` expands the i-th Lagrange polynomial as

    l_i(theta) = sum_j a[i, j] * theta**j / j!     (j = 0..s-1, zero based)

so that the step of the integrator reads ``k * sum_ij a[i, j] phi_{j+1}(kA) F_i``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

RULE_KINDS = ("gauss", "lobatto", "trapezoidal", "simpson", "midpoint", "custom")

_NEWTON_MAXITER = 100
_NEWTON_TOL = 1e-15


class NodeSolverError(RuntimeError):
    """Newton iteration for polynomial roots did not converge."""


def _legendre(n, x):
    """Return (P_n(x), P_{n-1}(x)) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if n == 0:
        return p0, np.zeros_like(x)
    p1 = x.copy()
    for m in range(2, n + 1):
        p0, p1 = p1, ((2 * m - 1) * x * p1 - (m - 1) * p0) / m
    return p1, p0


def gauss_legendre(n):
    """Gauss-Legendre nodes and weights on [-1, 1].

    Newton iteration on P_n started from Chebyshev points.
    """
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    x = np.cos(np.pi * (np.arange(n) + 0.5) / n)[::-1].copy()
    for _ in range(_NEWTON_MAXITER):
        pn, pm = _legendre(n, x)
        dp = n * (pm - x * pn) / (1.0 - x * x)
        dx = pn / dp
        x -= dx
        if np.max(np.abs(dx)) <= _NEWTON_TOL:
            break
    else:
        raise NodeSolverError(f"Gauss-Legendre nodes (n={n}) did not converge")
    pn, pm = _legendre(n, x)
    dp = n * (pm - x * pn) / (1.0 - x * x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # symmetric by construction; clean the last bits
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def gauss_lobatto(n):
    """Legendre-Gauss-Lobatto nodes and weights on [-1, 1] (``n >= 2`` points).

    The interior points are the roots of P'_{n-1}; Newton is applied to
    (1 - x^2) P'_N, whose derivative is -N(N+1) P_N.
    """
    if n < 2:
        raise ValueError(f"Lobatto rule needs at least two nodes, got {n}")
    N = n - 1
    x = -np.cos(np.pi * np.arange(n) / N)
    if n > 2:
        xi = x[1:-1].copy()
        for _ in range(_NEWTON_MAXITER):
            pn, pm = _legendre(N, xi)
            dx = N * (pm - xi * pn) / (N * (N + 1) * pn)
            xi += dx
            if np.max(np.abs(dx)) <= _NEWTON_TOL:
                break
        else:
            raise NodeSolverError(f"Gauss-Lobatto nodes (n={n}) did not converge")
        x[1:-1] = xi
    x = 0.5 * (x - x[::-1])
    pn, _ = _legendre(N, x)
    w = 2.0 / (N * (N + 1) * pn * pn)
    w = 0.5 * (w + w[::-1])
    return x, w


def lagrange_coefficients(nodes):
    """Coefficient matrix ``a`` of the Lagrange basis in the scaled monomials theta^j/j!.

    Parameters
    ----------
    nodes : sequence of float
        Pairwise distinct interpolation nodes.

    Returns
    -------
    ndarray, shape (s, s)
    """
    c = np.asarray(nodes, dtype=float).ravel()
    s = c.size
    if s == 0:
        raise ValueError("empty node set")
    if np.unique(c).size != s:
        raise ValueError(f"nodes must be pairwise distinct: {c.tolist()}")
    fact = np.array([math.factorial(j) for j in range(s)], dtype=float)
    a = np.empty((s, s))
    for i in range(s):
        others = np.delete(c, i)
        coef = P.polyfromroots(others) if s > 1 else np.ones(1)
        coef = coef / np.prod(c[i] - others)
        a[i] = coef * fact
    return a


@dataclass(frozen=True)
class QuadratureRule:
    """Interpolatory rule on [0, 1]; immutable once built."""

    nodes: np.ndarray
    coeffs: np.ndarray
    kind: str = "custom"
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).ravel()
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (nodes.size, nodes.size):
            raise ValueError("coefficient matrix must be s x s")
        if np.any(nodes < 0.0) or np.any(nodes > 1.0):
            raise ValueError("nodes must lie in [0, 1]")
        nodes.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "coeffs", coeffs)
        w = _weights(coeffs)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def s(self):
        return self.nodes.size

    @property
    def canonical(self):
        """False for user-supplied node sets (no order statement is claimed for them)."""
        return self.kind != "custom"

    def basis(self, theta):
        """Evaluate all Lagrange polynomials l_i at ``theta``; returns shape (s, len(theta))."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        powers = np.array([theta**j / math.factorial(j) for j in range(self.s)])
        return self.coeffs @ powers

    def __repr__(self):
        return f"QuadratureRule(kind={self.kind!r}, nodes={np.round(self.nodes, 6).tolist()})"


def _weights(coeffs):
    s = coeffs.shape[0]
    inv = np.array([1.0 / math.factorial(j + 1) for j in range(s)])
    return coeffs @ inv


def make_rule(kind, s=None):
    """Build one of the canonical rules.

    ``trapezoidal`` and ``simpson`` fix their own node count and ``midpoint``
    is the one-point Gauss rule, so ``s`` may be omitted for them.
    """
    if kind == "trapezoidal":
        nodes = np.array([0.0, 1.0])
    elif kind == "simpson":
        nodes = np.array([0.0, 0.5, 1.0])
    elif kind == "midpoint":
        nodes = np.array([0.5])
        kind = "gauss"
    elif kind in ("gauss", "lobatto"):
        if s is None or s < 1:
            raise ValueError(f"{kind} rule needs s >= 1, got {s}")
        if kind == "gauss":
            x, _ = gauss_legendre(s)
        else:
            if s < 2:
                raise ValueError(f"lobatto rule needs s >= 2, got {s}")
            x, _ = gauss_lobatto(s)
        nodes = 0.5 * (x + 1.0)
    else:
        raise ValueError(f"unknown rule kind {kind!r}; expected one of {RULE_KINDS[:-1]}")
    return QuadratureRule(nodes, lagrange_coefficients(nodes), kind)


def custom_rule(nodes):
    nodes = np.asarray(nodes, dtype=float)
    return QuadratureRule(nodes, lagrange_coefficients(nodes), "custom")


def parse_rule(text):
    """Parse CLI rule syntax: ``gauss:<s>``, ``lobatto:<s>``, ``trapezoidal``, ``simpson``, ``midpoint``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name in ("gauss", "lobatto"):
        if not arg:
            raise ValueError(f"rule {name!r} needs a node count, e.g. {name}:2")
        return make_rule(name, int(arg))
    if arg:
        raise ValueError(f"rule {name!r} takes no node count")
    return make_rule(name)


def weights_at_zero(rule):
    """Classical quadrature weights int_0^1 l_i(theta) dtheta."""
    return np.array(rule.weights)


def exactness_degree(rule, tol=1e-10, max_degree=64):
    """Largest d with sum_i w_i c_i^r == 1/(r+1) for every r <= d (-1 if none)."""
    w, c = rule.weights, rule.nodes
    d = -1
    for r in range(max_degree + 1):
        if abs(np.dot(w, c**r) - 1.0 / (r + 1)) > tol:
            break
        d = r
    return d


def default_trace_depth(rule):
    """Trace depth pairing each node family with its attainable order."""
    if rule.kind == "gauss":
        return 2 * rule.s
    if rule.kind in ("lobatto", "trapezoidal", "simpson"):
        return 2 * rule.s - 2
    return rule.s
