"""Invariant checks behind ``expquad verify``.

Every check returns a :class:`Check`; :func:`run_all` collects them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .integrators import IntegratorConfig, integrate
from .phi import phi_table
from .problems import make_problem
from .quadrature import exactness_degree, gauss_legendre, make_rule
from .space import elliptic_solve, finite_difference, lgl_collocation

Z_GRID = (-1e6, -1e3, -10.0, -1.0, -1e-3, -1e-8)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _rules_up_to_four():
    rules = [make_rule("gauss", s) for s in range(1, 5)]
    rules += [make_rule("lobatto", s) for s in range(2, 5)]
    rules += [make_rule("trapezoidal"), make_rule("simpson")]
    return rules


def check_phi_recursion(tol=1e-12):
    worst = 0.0
    for z in Z_GRID:
        tab = phi_table(13, np.array(z))
        for j in range(13):
            resid = abs(tab[j + 1] * z - tab[j] + 1.0 / math.factorial(j))
            worst = max(worst, resid / max(1.0, abs(tab[j])))
    return Check("phi recursion identity", worst <= tol, f"max scaled residual {worst:.2e} (tol {tol:g})")


def check_phi_bounds():
    ok = True
    for z in Z_GRID + (0.0,):
        tab = phi_table(12, np.array(z))
        for j in range(13):
            # exp(z) underflows to 0 for z below about -745
            lower = tab[j] >= 0.0 if (j == 0 and z < -745) else tab[j] > 0.0
            ok &= lower and tab[j] <= 1.0 / math.factorial(j) * (1 + 1e-15)
    return Check("phi bounds 0 < phi_j(z) <= 1/j!", bool(ok), "z-grid, j = 0..12")


def interpolation_residual(rule):
    """Largest deviation from sum_i c_i^r a_{i,l} = r! [l == r+1], r <= s-1."""
    c, a = rule.nodes, rule.coeffs
    s = rule.s
    worst = 0.0
    for r in range(s):
        row = (c**r) @ a
        target = np.zeros(s)
        target[r] = math.factorial(r)
        worst = max(worst, float(np.max(np.abs(row - target))))
    return worst


def check_quadrature_identities(tol=1e-12):
    worst = 0.0
    for rule in _rules_up_to_four():
        worst = max(worst, interpolation_residual(rule))
        delta = rule.basis(rule.nodes)
        worst = max(worst, float(np.max(np.abs(delta - np.eye(rule.s)))))
        worst = max(worst, abs(float(rule.weights.sum()) - 1.0))
    return Check("quadrature interpolation identities", worst <= tol, f"max residual {worst:.2e} (tol {tol:g})")


def check_exactness():
    bad = []
    for s in range(1, 5):
        d = exactness_degree(make_rule("gauss", s))
        if d != 2 * s - 1:
            bad.append(f"gauss:{s}->{d}")
    for s in range(2, 5):
        d = exactness_degree(make_rule("lobatto", s))
        if d != 2 * s - 3:
            bad.append(f"lobatto:{s}->{d}")
    return Check("exactness degrees (gauss 2s-1, lobatto 2s-3)", not bad, ", ".join(bad) or "s = 1..4")


def symmetry_residual(disc):
    d = disc.sym_diag
    S = d[:, None] * disc.interior / d[None, :]
    return float(np.max(np.abs(S - S.T)) / np.max(np.abs(disc.interior)))


def check_symmetrizable(J=39, tol=1e-9):
    r = symmetry_residual(lgl_collocation(J))
    return Check(f"LGL symmetrizability (J={J})", r <= tol, f"relative asymmetry {r:.2e} (tol {tol:g})")


def check_negative_spectrum():
    worst = -np.inf
    for disc in (finite_difference(50), lgl_collocation(20), lgl_collocation(39)):
        worst = max(worst, float(np.max(np.linalg.eigvals(disc.interior).real)))
        worst = max(worst, float(np.max(disc.phi.eigenvalues)))
    return Check("interior eigenvalues negative", worst < 0, f"largest eigenvalue {worst:.3e}")


def check_constant_preservation(tol=1e-11):
    prob = make_problem("constant", value=1.7)
    worst = 0.0
    for disc in (finite_difference(20), lgl_collocation(16)):
        for rule in _rules_up_to_four():
            for approach in ("classical", "corrected"):
                cfg = IntegratorConfig(rule, approach, None, 0.125)
                for st in integrate(disc, prob, cfg, trajectory=True):
                    worst = max(worst, disc.norm(st.U - 1.7))
    return Check("constant-state preservation", worst <= tol, f"max deviation {worst:.2e} (tol {tol:g})")


def check_sine_equivalence(tol=1e-12):
    prob = make_problem("sine")
    worst = 0.0
    for disc in (finite_difference(30), lgl_collocation(24)):
        for rule in _rules_up_to_four():
            a = integrate(disc, prob, IntegratorConfig(rule, "classical", None, 0.0625), trajectory=True)
            b = integrate(disc, prob, IntegratorConfig(rule, "corrected", None, 0.0625), trajectory=True)
            worst = max(worst, max(disc.norm(x.U - y.U) for x, y in zip(a, b)))
    return Check("classical == corrected on trace-free problem", worst <= tol, f"max difference {worst:.2e} (tol {tol:g})")


def phi_quadrature_oracle(A, j, k, v, panels=10000, order=5):
    """phi_j(kA) v from the integral definition by composite Gauss-Legendre quadrature.

    phi_0 is exp(kA) v; for j >= 1 integrates exp(k(1-theta)A) theta^(j-1)/(j-1)! v
    over [0, 1].  Matrix exponentials come from scipy, not from an eigenbasis.
    """
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    if j == 0:
        return expm(k * A) @ v
    x, w = gauss_legendre(order)
    width = 1.0 / panels
    local = 0.5 * (x + 1.0) * width  # offsets inside a panel
    # exp(k(1-theta)A) = exp(k(1-right)A) exp(k(right-theta)A) with right the panel end
    inner = [expm(k * (width - o) * A) @ v for o in local]
    step = expm(k * width * A)
    total = np.zeros_like(v)
    outer = np.eye(A.shape[0])  # exp(k(1-right)A), starting from the last panel
    for p in range(panels - 1, -1, -1):
        left = p * width
        for o, wt, vec in zip(local, w, inner):
            theta = left + o
            total += 0.5 * width * wt * theta ** (j - 1) / math.factorial(j - 1) * (outer @ vec)
        outer = outer @ step
    return total


def check_phi_oracle(tol=1e-10):
    worst = 0.0
    k = 0.1
    for disc in (finite_difference(5), lgl_collocation(7)):
        v = np.ones(disc.dim)
        for j in range(0, 5):
            got = disc.phi.apply(j, k, v)
            ref = phi_quadrature_oracle(disc.interior, j, k, v)
            worst = max(worst, float(np.max(np.abs(got - ref)) / np.max(np.abs(ref))))
    return Check("phi action vs quadrature oracle", worst <= tol, f"max relative error {worst:.2e} (tol {tol:g})")


def elliptic_orders(Ms=(50, 100, 200, 400)):
    errs = []
    for M in Ms:
        disc = finite_difference(M)
        w = elliptic_solve(disc, np.exp, 1.0, math.e)
        errs.append(float(np.max(np.abs(w - np.exp(disc.nodes)))))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    return errs, orders


def lgl_elliptic_error(J=20):
    disc = lgl_collocation(J)
    w = elliptic_solve(disc, np.exp, 1.0, math.e)
    return float(np.max(np.abs(w - np.exp(disc.nodes))))


def check_elliptic():
    _, orders = elliptic_orders()
    e = lgl_elliptic_error()
    ok = all(abs(o - 2.0) <= 0.1 for o in orders) and e <= 1e-10
    return Check("elliptic consistency (fd O(h^2), lgl spectral)", ok,
                 f"fd orders {', '.join(f'{o:.3f}' for o in orders)}; lgl J=20 error {e:.2e}")


def parabolic_sum_bound(disc, k):
    """max over n <= 1/k and eigenvalues of |k lam (e^{k lam} - e^{t_n lam}) / (1 - e^{k lam})|."""
    z = k * disc.phi.eigenvalues
    N = int(round(1.0 / k))
    worst = 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        for n in range(1, N + 1):
            val = np.abs(z * (np.exp(z) - np.exp(n * z)) / (1.0 - np.exp(z)))
            worst = max(worst, float(np.nanmax(val)))
    return worst


def check_parabolic_bound(limit=1.1):
    worst = 0.0
    for disc in (finite_difference(100), lgl_collocation(39)):
        for k in (1e-3, 1e-2, 1e-1):
            worst = max(worst, parabolic_sum_bound(disc, k))
    return Check("discrete parabolic sum bound", worst <= limit, f"max {worst:.4f} (limit {limit})")


CHECKS = (
    check_phi_recursion,
    check_phi_bounds,
    check_quadrature_identities,
    check_exactness,
    check_symmetrizable,
    check_negative_spectrum,
    check_constant_preservation,
    check_sine_equivalence,
    check_phi_oracle,
    check_elliptic,
    check_parabolic_bound,
)


def run_all():
    return [check() for check in CHECKS]

