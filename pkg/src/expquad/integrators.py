"""Exponential quadrature steppers for the semidiscrete heat equation.

Two ways of treating time-dependent Dirichlet data:

* ``classical``  discretize in space first and apply the rule to
  U' = A_{h,0} U + A_h Q_h g(t) + P_h f(t);
* ``corrected``  advance the boundary-aware auxiliary problems, which adds
  phi-weighted boundary corrections built from the traces dA^j u(t_n) and
  dA^l f(t_n + c_i k).

All phi actions share one pass through the cached eigenbasis of the
interior operator: each step maps its inputs to modal coordinates, combines
them with tabulated phi values and maps back once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .problems import SIDES, trace_from_data
from .quadrature import QuadratureRule, default_trace_depth

APPROACHES = ("classical", "corrected")


@dataclass(frozen=True)
class State:
    t: float
    U: np.ndarray


@dataclass(frozen=True)
class IntegratorConfig:
    rule: QuadratureRule
    approach: str = "corrected"
    p: int | None = None
    k: float = 0.1
    t0: float = 0.0
    T: float = 1.0

    def __post_init__(self):
        if self.approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}, got {self.approach!r}")
        if not self.k > 0:
            raise ValueError(f"step size must be positive, got {self.k}")
        if self.approach == "corrected" and self.p is not None and self.p < 1:
            raise ValueError(f"trace depth p must be >= 1, got {self.p}")
        self.steps  # validates divisibility

    @property
    def depth(self):
        """Trace depth actually used (defaults by node family)."""
        return default_trace_depth(self.rule) if self.p is None else self.p

    @property
    def steps(self):
        span = self.T - self.t0
        if span < 0:
            raise ValueError("T must not precede t0")
        n = round(span / self.k)
        if abs(n * self.k - span) > 1e-12 * max(1.0, abs(span)):
            raise ValueError(f"step size {self.k} does not divide [{self.t0}, {self.T}]")
        return n

    def with_k(self, k):
        return IntegratorConfig(self.rule, self.approach, self.p, float(k), self.t0, self.T)


class Stepper:
    """One-step map of a given approach for a fixed (disc, prob, rule, p)."""

    def __init__(self, disc, prob, rule, approach="corrected", p=None):
        if approach not in APPROACHES:
            raise ValueError(f"approach must be one of {APPROACHES}, got {approach!r}")
        self.disc = disc
        self.prob = prob
        self.rule = rule
        self.approach = approach
        if approach == "corrected":
            p = default_trace_depth(rule) if p is None else p
            if p < 1:
                raise ValueError(f"trace depth p must be >= 1, got {p}")
            if p > prob.max_order:
                raise ValueError(
                    f"trace depth {p} exceeds the support of problem {prob.name!r} ({prob.max_order})"
                )
        self.p = p
        self.ev = disc.phi
        self._beta = self.ev.to_modal(np.column_stack([disc.beta_left, disc.beta_right]))

    @property
    def jmax(self):
        s = self.rule.s
        return s if self.approach == "classical" else self.p + s

    def _inject(self, gl, gr):
        return self._beta[:, 0] * gl + self._beta[:, 1] * gr

    def __call__(self, U, t, k):
        U = np.asarray(U, dtype=float)
        if U.shape != (self.disc.dim,):
            raise ValueError(f"state has shape {U.shape}, expected ({self.disc.dim},)")
        if not k > 0:
            raise ValueError(f"step size must be positive, got {k}")
        if self.approach == "classical":
            return self._classical(U, t, k)
        return self._corrected(U, t, k)

    def _node_sources(self, t, k):
        times = t + self.rule.nodes * k
        x = self.disc.nodes
        F = np.column_stack([self.prob.source(x, ti) * np.ones_like(x) for ti in times])
        return times, F

    def _classical(self, U, t, k):
        disc, prob, a = self.disc, self.prob, self.rule.coeffs
        s = self.rule.s
        tab = self.ev.phi_values(s, k)
        times, F = self._node_sources(t, k)
        if getattr(disc, "has_lh_qh", False):
            for i, ti in enumerate(times):
                F[:, i] += disc.lh_qh(*(
                    prob.source_trace(0, ti, side) - prob.boundary_derivative(1, ti, side)
                    for side in SIDES
                ))
        Fh = self.ev.to_modal(F)
        for i, ti in enumerate(times):
            Fh[:, i] += self._inject(*(prob.boundary(ti, side) for side in SIDES))
        out = tab[0] * self.ev.to_modal(U)
        for i in range(s):
            weight = sum(a[i, j] * tab[j + 1] for j in range(s))
            out += k * weight * Fh[:, i]
        return self.ev.from_modal(out)

    def _corrected(self, U, t, k):
        disc, prob, a = self.disc, self.prob, self.rule.coeffs
        s, p = self.rule.s, self.p
        tab = self.ev.phi_values(p + s, k)
        lhqh = getattr(disc, "has_lh_qh", False)

        # boundary traces of A^j u(t_n), j = 0..p, from the data
        tau = [[trace_from_data(prob, j, t, side) for side in SIDES] for j in range(p + 2 if lhqh else p + 1)]
        out = tab[0] * self.ev.to_modal(U)
        kp = 1.0
        for j in range(1, p + 2):
            kp *= k
            out += kp * tab[j] * self._inject(*tau[j - 1])
        if lhqh:
            out -= self._lhqh_terms(tab, k, [tau[j] for j in range(1, p + 1)], first_order=1)

        times, F = self._node_sources(t, k)
        Fh = self.ev.to_modal(F)
        for i, ti in enumerate(times):
            sigma = [[prob.source_trace(l, ti, side) for side in SIDES] for l in range(p + 1 if lhqh else p)]
            inj = [self._inject(*sigma[l]) for l in range(p)]
            acc = np.zeros(disc.dim)
            for j in range(1, s + 1):
                term = tab[j] * Fh[:, i]
                kp = 1.0
                for l in range(p):
                    kp *= k
                    term = term + kp * tab[j + l + 1] * inj[l]
                if lhqh:
                    term = term - self._lhqh_terms(
                        tab, k, [sigma[l + 1] for l in range(p - 1)], first_order=j + 1
                    )
                acc += a[i, j - 1] * term
            out += k * acc
        return self.ev.from_modal(out)

    def _lhqh_terms(self, tab, k, traces, first_order):
        """sum_m k^(m+1) phi_{first_order+m} L_h Q_h traces[m], in modal form."""
        res = np.zeros(self.disc.dim)
        kp = 1.0
        for m, tr in enumerate(traces):
            kp *= k
            res += kp * tab[first_order + m] * self.ev.to_modal(self.disc.lh_qh(*tr))
        return res


def classical_step(disc, prob, rule, state, k):
    stepper = Stepper(disc, prob, rule, "classical")
    return State(state.t + k, stepper(state.U, state.t, k))


def corrected_step(disc, prob, rule, p, state, k):
    stepper = Stepper(disc, prob, rule, "corrected", p)
    return State(state.t + k, stepper(state.U, state.t, k))


def integrate(disc, prob, config, trajectory=False):
    """March from U_0 = P_h u0 at t0 to T with ``config.steps`` uniform steps.

    Returns the final :class:`State`, or the list of all states when
    ``trajectory`` is true.
    """
    stepper = Stepper(disc, prob, config.rule, config.approach, config.depth if config.approach == "corrected" else None)
    n = config.steps
    U = disc.restrict(prob.initial)
    states = [State(config.t0, U)]
    for m in range(n):
        t = config.t0 + m * config.k
        U = stepper(U, t, config.k)
        if trajectory:
            states.append(State(config.t0 + (m + 1) * config.k, U))
    if trajectory:
        return states
    return State(config.t0 + n * config.k, U)


def parse_stepsizes(text):
    """Comma separated stepsizes, each a decimal or a fraction like ``1/320``."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if item:
            out.append(Fraction(item))
    if not out:
        raise ValueError("no step sizes given")
    if any(k <= 0 for k in out):
        raise ValueError("step sizes must be positive")
    return out
