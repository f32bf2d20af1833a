"""Canned convergence studies (ids 1-9): one problem, space and rule each, both approaches."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .harness import make_config, run_convergence
from .problems import make_problem
from .quadrature import parse_rule
from .space import parse_space


def _dyadic(first, count):
    return [Fraction(1, first * 2**m) for m in range(count)]


def _tenths():
    return [Fraction(1, 10 * 2**m) for m in range(6)]


@dataclass(frozen=True)
class TableSpec:
    id: int
    problem: str
    space: str
    rule: str
    depth: int
    ks: tuple
    title: str


TABLES = {
    1: TableSpec(1, "poly", "fd:999", "trapezoidal", 2, tuple(_tenths()), "Trapezoidal rule, h=1e-3, u=x(1-x)exp(-t)"),
    2: TableSpec(2, "exp", "fd:999", "trapezoidal", 2, tuple(_tenths()), "Trapezoidal rule, h=1e-3, u=exp(x-t)"),
    3: TableSpec(3, "exp", "lgl:39", "simpson", 4, tuple(_dyadic(2, 6)), "Simpson rule, J=39, u=exp(x-t)"),
    4: TableSpec(4, "poly", "lgl:39", "midpoint", 2, tuple(_dyadic(4, 6)), "Midpoint rule, J=39, u=x(1-x)exp(-t)"),
    5: TableSpec(5, "poly", "lgl:39", "gauss:2", 4, tuple(_dyadic(2, 6)), "Gauss s=2, J=39, u=x(1-x)exp(-t)"),
    6: TableSpec(6, "exp", "lgl:39", "midpoint", 2, tuple(_dyadic(8, 6)), "Midpoint rule, J=39, u=exp(x-t)"),
    7: TableSpec(7, "exp", "lgl:39", "gauss:2", 4, tuple(_dyadic(2, 6)), "Gauss s=2, J=39, u=exp(x-t)"),
    8: TableSpec(8, "exp", "lgl:39", "gauss:3", 6, tuple(_dyadic(2, 6)), "Gauss s=3, J=39, u=exp(x-t)"),
    9: TableSpec(9, "exp", "lgl:39", "gauss:4", 8, tuple(_dyadic(2, 5)), "Gauss s=4, J=39, u=exp(x-t)"),
}

_SPACES = {}


def _space(text):
    # the fd:999 factorization is shared between tables 1 and 2
    if text not in _SPACES:
        _SPACES[text] = parse_space(text)
    return _SPACES[text]


def run_table(table_id, ks=None):
    """Both approaches for a canned table; returns {"classical": [...], "corrected": [...]}."""
    spec = TABLES[table_id]
    disc = _space(spec.space)
    prob = make_problem(spec.problem)
    rule = parse_rule(spec.rule)
    ks = spec.ks if ks is None else ks
    return {
        "classical": run_convergence(prob, disc, make_config(rule, "classical"), ks),
        "corrected": run_convergence(prob, disc, make_config(rule, "corrected", spec.depth), ks),
    }
