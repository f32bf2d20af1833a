"""Dirichlet discretizations of d^2/dx^2 on [0, 1].

Each discretization splits the full operator into the interior block
``interior`` (A_{h,0}) and two boundary columns ``beta_left``/``beta_right``
so that the discrete Laplacian of a grid function with boundary values
(g0, g1) is ``interior @ U + g0 * beta_left + g1 * beta_right``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .phi import PhiEvaluator
from .quadrature import gauss_lobatto


@dataclass(frozen=True, eq=False)
class SpaceDiscretization:
    kind: str
    nodes: np.ndarray
    interior: np.ndarray
    beta_left: np.ndarray
    beta_right: np.ndarray
    norm_weights: np.ndarray
    sym_diag: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        for name in ("nodes", "interior", "beta_left", "beta_right", "norm_weights", "sym_diag"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if np.any(self.norm_weights <= 0):
            raise ValueError("norm weights must be positive")

    @property
    def dim(self):
        return self.nodes.size

    @cached_property
    def phi(self):
        """Spectral factorization of the interior operator, built on first use."""
        return PhiEvaluator(self.interior, self.sym_diag)

    def boundary_injection(self, g_left, g_right):
        """A_h Q_h applied to boundary values (scalars or arrays of shape (q,))."""
        g_left = np.asarray(g_left, dtype=float)
        g_right = np.asarray(g_right, dtype=float)
        if g_left.ndim == 0:
            return g_left * self.beta_left + g_right * self.beta_right
        return np.outer(self.beta_left, g_left) + np.outer(self.beta_right, g_right)

    def restrict(self, u):
        """Interior nodal sampling of a callable ``u(x)``."""
        return np.asarray(u(self.nodes), dtype=float) * np.ones(self.dim)

    def norm(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(f"vector has shape {v.shape}, expected ({self.dim},)")
        return float(np.sqrt(np.dot(self.norm_weights, v * v)))

    def lh_qh(self, g_left, g_right):
        """L_h Q_h applied to boundary values.

        Zero for both built-in schemes: the boundary interpolant vanishes at
        interior nodes.  Kept so the integrators carry the term explicitly.
        """
        return np.zeros(self.dim)

    def __repr__(self):
        return f"SpaceDiscretization({self.label or self.kind}, M={self.dim})"


def finite_difference(M):
    """Second-order central differences on a uniform grid with ``M`` interior points."""
    if M < 2:
        raise ValueError(f"finite differences need M >= 2 interior points, got {M}")
    h = 1.0 / (M + 1)
    x = h * np.arange(1, M + 1)
    A = (np.diag(np.full(M, -2.0)) + np.diag(np.ones(M - 1), 1) + np.diag(np.ones(M - 1), -1)) / h**2
    bl = np.zeros(M)
    br = np.zeros(M)
    bl[0] = br[-1] = 1.0 / h**2
    return SpaceDiscretization(
        "fd", x, A, bl, br, np.full(M, h), np.ones(M), label=f"fd:{M}"
    )


def differentiation_matrix(x):
    """First-derivative collocation matrix on the nodes ``x`` (barycentric form).

    Diagonal entries are set to minus the off-diagonal row sums so that
    constants are differentiated to zero up to roundoff.
    """
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def lgl_collocation(J):
    """Legendre-Gauss-Lobatto collocation with J+1 nodes (J-1 interior unknowns)."""
    if J < 2:
        raise ValueError(f"LGL collocation needs J >= 2, got {J}")
    xi, wi = gauss_lobatto(J + 1)
    x = 0.5 * (xi + 1.0)
    w = 0.5 * wi
    D = differentiation_matrix(x)
    D2 = D @ D
    np.fill_diagonal(D2, 0.0)
    np.fill_diagonal(D2, -D2.sum(axis=1))
    inner = slice(1, J)
    alpha = w[inner]
    return SpaceDiscretization(
        "lgl",
        x[inner],
        D2[inner, inner],
        D2[inner, 0],
        D2[inner, -1],
        alpha,
        np.sqrt(alpha),
        label=f"lgl:{J}",
    )


def parse_space(text):
    """``fd:<M>`` or ``lgl:<J>``."""
    name, _, arg = text.partition(":")
    try:
        n = int(arg)
    except ValueError:
        raise ValueError(f"space spec {text!r} must look like fd:<M> or lgl:<J>") from None
    if name == "fd":
        return finite_difference(n)
    if name == "lgl":
        return lgl_collocation(n)
    raise ValueError(f"unknown space discretization {name!r}")


def elliptic_solve(disc, rhs, g_left, g_right):
    """Solve A_{h,0} w + A_h Q_h (g_left, g_right) = restrict(rhs) for w."""
    b = disc.restrict(rhs) - disc.boundary_injection(g_left, g_right)
    return np.linalg.solve(disc.interior, b)


def discrete_max_principle_bound(disc):
    """||A_{h,0}^{-1} A_h Q_h|| from (R^2, euclidean) into the discrete norm."""
    B = np.column_stack([disc.beta_left, disc.beta_right])
    X = np.linalg.solve(disc.interior, B)
    Xw = np.sqrt(disc.norm_weights)[:, None] * X
    return float(np.linalg.norm(Xw, 2))


def restrict(disc, u):
    """Interior nodal values (u(x_1), ..., u(x_M))."""
    return disc.restrict(u)


def discrete_norm(disc, v):
    """sqrt(sum_m alpha_m v_m^2)."""
    return disc.norm(v)
