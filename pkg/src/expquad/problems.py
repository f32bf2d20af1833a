"""Test problems u_t = u_xx + f on [0, 1] x [t0, T] with Dirichlet data.

A problem exposes its data (source, initial value, boundary values), the
time derivatives of that data, and the boundary traces of ``A^j u`` and
``A^l f`` where ``A = d^2/dx^2``.  The manufactured problems are separable,
``u(x, t) = X(x) exp(mu t)``, so every derivative is closed form.
"""
from __future__ import annotations

import numpy as np

SIDES = ("left", "right")
MAX_TRACE_DEPTH = 8


class DerivativeOrderError(ValueError):
    """A derivative beyond what the problem supplies was requested."""


def _side_x(side):
    if side == "left":
        return 0.0
    if side == "right":
        return 1.0
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


class Problem:
    """Interface used by the integrators.

    Subclasses implement :meth:`source`, :meth:`initial`,
    :meth:`boundary_derivative`, :meth:`source_trace` and optionally
    :meth:`exact` and :meth:`solution_trace`.
    """

    name = "problem"
    max_order = MAX_TRACE_DEPTH
    has_exact = False

    def source(self, x, t):
        raise NotImplementedError

    def initial(self, x):
        raise NotImplementedError

    def boundary_derivative(self, r, t, side):
        """r-th time derivative of the Dirichlet data on ``side``."""
        raise NotImplementedError

    def source_trace(self, l, t, side, r=0):
        """Boundary value of A^l applied to the r-th time derivative of f."""
        raise NotImplementedError

    def exact(self, x, t):
        raise NotImplementedError(f"problem {self.name!r} has no exact solution")

    def solution_trace(self, j, t, side):
        """Boundary value of A^j u(t), when known in closed form."""
        raise NotImplementedError(f"problem {self.name!r} has no analytic traces")

    def boundary(self, t, side):
        return self.boundary_derivative(0, t, side)

    def _check_order(self, order, what):
        if order < 0:
            raise DerivativeOrderError(f"{what} order must be nonnegative, got {order}")
        if order > self.max_order + 1:
            raise DerivativeOrderError(
                f"{what} order {order} exceeds what problem {self.name!r} supplies "
                f"(max {self.max_order + 1})"
            )


def trace_from_data(prob, j, t, side):
    """Boundary value of A^j u(t) from the data alone.

    Differentiating u' = Au + f in time gives
    dA^j u = g^(j) - sum_{l<j} dA^l f^(j-1-l).
    """
    if j < 0:
        raise DerivativeOrderError(f"trace order must be nonnegative, got {j}")
    if j > prob.max_order + 1:
        raise DerivativeOrderError(f"trace order {j} exceeds problem support ({prob.max_order + 1})")
    val = prob.boundary_derivative(j, t, side)
    for l in range(j):
        val -= prob.source_trace(l, t, side, r=j - 1 - l)
    return float(val)


class SeparableProblem(Problem):
    """u(x, t) = profile(x) * exp(rate * t).

    ``profile(x, d)`` returns the d-th x-derivative of the profile.  The source
    profile defaults to ``rate * X - X''``; pass ``source_profile`` to give it
    exactly (e.g. identically zero).
    """

    has_exact = True

    def __init__(self, name, profile, rate, source_profile=None, max_order=MAX_TRACE_DEPTH):
        self.name = name
        self._X = profile
        self.rate = float(rate)
        self.max_order = max_order
        if source_profile is None:
            def source_profile(x, d):
                return self.rate * profile(x, d) - profile(x, d + 2)
        self._F = source_profile

    def _time(self, t, r=0):
        return self.rate**r * np.exp(self.rate * t)

    def exact(self, x, t):
        return self._X(np.asarray(x, dtype=float), 0) * self._time(t)

    def initial(self, x):
        return self.exact(x, 0.0)

    def source(self, x, t):
        return self._F(np.asarray(x, dtype=float), 0) * self._time(t)

    def source_derivative(self, r, x, t):
        self._check_order(r, "time derivative")
        return self._F(np.asarray(x, dtype=float), 0) * self._time(t, r)

    def boundary_derivative(self, r, t, side):
        self._check_order(r, "time derivative")
        return float(self._X(_side_x(side), 0) * self._time(t, r))

    def source_trace(self, l, t, side, r=0):
        self._check_order(l, "trace")
        self._check_order(r, "time derivative")
        return float(self._F(_side_x(side), 2 * l) * self._time(t, r))

    def solution_trace(self, j, t, side):
        self._check_order(j, "trace")
        return float(self._X(_side_x(side), 2 * j) * self._time(t))

    def residual(self, x, t):
        """u_t - u_xx - f at (x, t); zero up to roundoff for a consistent problem."""
        x = np.asarray(x, dtype=float)
        return (self._X(x, 0) * self.rate - self._X(x, 2)) * self._time(t) - self.source(x, t)

    def __repr__(self):
        return f"SeparableProblem({self.name!r})"


def _poly_profile(x, d):
    x = np.asarray(x, dtype=float)
    if d == 0:
        return x * (1.0 - x)
    if d == 1:
        return 1.0 - 2.0 * x
    if d == 2:
        return np.full_like(x, -2.0)
    return np.zeros_like(x)


def _exp_profile(x, d):
    return np.exp(np.asarray(x, dtype=float))


def _sinpi(x):
    # exact zeros at the integers
    x = np.asarray(x, dtype=float)
    return np.where(x == np.round(x), 0.0, np.sin(np.pi * x))


def _sine_profile(x, d):
    x = np.asarray(x, dtype=float)
    base = _sinpi(x) if d % 2 == 0 else np.cos(np.pi * x)
    sign = (-1) ** (d // 2)
    return sign * np.pi**d * base


def _zero_profile(x, d):
    return np.zeros_like(np.asarray(x, dtype=float))


def make_problem(name, value=1.0):
    """Manufactured problems.

    ``poly``      u = x(1-x) e^{-t}      (homogeneous boundary data)
    ``exp``       u = e^{x-t}            (time-dependent boundary data)
    ``sine``      u = sin(pi x) e^{-pi^2 t}, f = 0, g = 0
    ``constant``  u = value, f = 0, g = value
    """
    if name == "poly":
        return SeparableProblem("poly", _poly_profile, -1.0)
    if name == "exp":
        return SeparableProblem("exp", _exp_profile, -1.0)
    if name == "sine":
        return SeparableProblem("sine", _sine_profile, -np.pi**2, source_profile=_zero_profile)
    if name == "constant":
        c = float(value)

        def profile(x, d):
            x = np.asarray(x, dtype=float)
            return np.full_like(x, c) if d == 0 else np.zeros_like(x)

        return SeparableProblem("constant", profile, 0.0, source_profile=_zero_profile)
    raise ValueError(f"unknown problem {name!r}; expected poly, exp, sine or constant")


PROBLEMS = ("poly", "exp", "sine")


def data_trace_table(prob, depth, t):
    """Array (depth+1, 2) of dA^j u(t) from the data, columns (left, right)."""
    return np.array([[trace_from_data(prob, j, t, s) for s in SIDES] for j in range(depth + 1)])


def source_trace_table(prob, depth, t):
    """Array (depth, 2) of dA^l f(t) for l < depth."""
    if depth == 0:
        return np.zeros((0, 2))
    return np.array([[prob.source_trace(l, t, s) for s in SIDES] for l in range(depth)])

