from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from expquad.harness import make_config, run_convergence
from expquad.integrators import (
    IntegratorConfig,
    State,
    Stepper,
    classical_step,
    corrected_step,
    integrate,
    parse_stepsizes,
)
from expquad.problems import SeparableProblem, make_problem
from expquad.quadrature import make_rule
from expquad.space import finite_difference, lgl_collocation

FD = finite_difference(20)
LGL = lgl_collocation(16)
RULES = [make_rule("gauss", s) for s in (1, 2, 3, 4)] + [
    make_rule("lobatto", 3),
    make_rule("trapezoidal"),
    make_rule("simpson"),
]
# above the ~1e-12 roundoff floor of the lgl:39 runs
RESOLVED = 1e-11


@pytest.fixture(scope="module")
def lgl39():
    return lgl_collocation(39)


@pytest.mark.parametrize("disc", [FD, LGL], ids=["fd", "lgl"])
@pytest.mark.parametrize("rule", RULES, ids=lambda r: f"{r.kind}{r.s}")
@pytest.mark.parametrize("approach", ["classical", "corrected"])
def test_constant_state_preserved(disc, rule, approach):
    prob = make_problem("constant", value=-2.5)
    states = integrate(disc, prob, IntegratorConfig(rule, approach, None, 0.1), trajectory=True)
    assert len(states) == 11
    assert max(disc.norm(s.U + 2.5) for s in states) <= 1e-11


@pytest.mark.parametrize("disc", [FD, LGL], ids=["fd", "lgl"])
@pytest.mark.parametrize("rule", RULES, ids=lambda r: f"{r.kind}{r.s}")
def test_trace_free_problem_approaches_agree(disc, rule):
    prob = make_problem("sine")
    a = integrate(disc, prob, IntegratorConfig(rule, "classical", None, 0.125), trajectory=True)
    for p in (1, 3):
        b = integrate(disc, prob, IntegratorConfig(rule, "corrected", p, 0.125), trajectory=True)
        assert max(disc.norm(x.U - y.U) for x, y in zip(a, b)) <= 1e-12


def test_trace_free_classical_step_is_pure_propagation():
    prob = make_problem("sine")
    U = FD.restrict(prob.initial)
    k = 0.05
    got = classical_step(FD, prob, make_rule("gauss", 2), State(0.0, U), k)
    assert got.t == pytest.approx(k)
    np.testing.assert_allclose(got.U, expm(k * FD.interior) @ U, rtol=1e-12, atol=1e-15)


def test_sine_final_state_close_to_exact(lgl39):
    prob = make_problem("sine")
    cfg = IntegratorConfig(make_rule("gauss", 2), "corrected", None, 1 / 64)
    end = integrate(lgl39, prob, cfg)
    assert end.t == pytest.approx(1.0)
    ref = lgl39.restrict(lambda x: prob.exact(x, 1.0))
    assert lgl39.norm(end.U - ref) <= 1e-10


def test_zero_steps_returns_initial():
    prob = make_problem("exp")
    cfg = IntegratorConfig(make_rule("gauss", 2), "corrected", None, 0.1, 0.5, 0.5)
    assert cfg.steps == 0
    end = integrate(FD, prob, cfg)
    np.testing.assert_array_equal(end.U, FD.restrict(prob.initial))
    assert end.t == 0.5


def _scaled(prob, c):
    X, F = prob._X, prob._F
    return SeparableProblem(
        "scaled", lambda x, d: c * X(x, d), prob.rate, source_profile=lambda x, d: c * F(x, d)
    )


@pytest.mark.parametrize("approach", ["classical", "corrected"])
def test_step_map_is_linear_in_data(approach):
    prob = make_problem("exp")
    rule = make_rule("gauss", 2)
    cfg = IntegratorConfig(rule, approach, None, 0.1)
    one = integrate(LGL, prob, cfg).U
    two = integrate(LGL, _scaled(prob, 2.0), cfg).U
    np.testing.assert_allclose(two, 2 * one, rtol=1e-12)


def test_step_wrappers_match_stepper():
    prob = make_problem("exp")
    rule = make_rule("gauss", 2)
    U = LGL.restrict(prob.initial)
    st = State(0.2, U)
    np.testing.assert_allclose(
        corrected_step(LGL, prob, rule, 4, st, 0.1).U, Stepper(LGL, prob, rule, "corrected", 4)(U, 0.2, 0.1)
    )
    np.testing.assert_allclose(
        classical_step(LGL, prob, rule, st, 0.1).U, Stepper(LGL, prob, rule, "classical")(U, 0.2, 0.1)
    )


def test_corrected_differs_from_classical_with_boundary_traces():
    prob = make_problem("poly")  # g = 0 but dA u != 0 at the ends
    rule = make_rule("gauss", 1)
    U = FD.restrict(prob.initial)
    a = classical_step(FD, prob, rule, State(0.0, U), 0.1).U
    b = corrected_step(FD, prob, rule, 2, State(0.0, U), 0.1).U
    assert FD.norm(a - b) > 1e-6


@pytest.mark.parametrize("s", [1, 2, 3])
def test_classical_order_reduction(lgl39, s):
    prob = make_problem("exp")
    ks = [Fraction(1, 2**m) for m in range(3, 7)]
    recs = run_convergence(prob, lgl39, make_config(make_rule("gauss", s), "classical"), ks, local=False)
    for r in recs[1:]:
        assert s - 0.2 <= r.global_order <= s + 0.6


@pytest.mark.parametrize("s", [1, 2, 3])
def test_corrected_order_restored(lgl39, s):
    prob = make_problem("exp")
    ks = [Fraction(1, 2**m) for m in range(1, 7)]
    recs = run_convergence(prob, lgl39, make_config(make_rule("gauss", s), "corrected", 2 * s), ks, local=False)
    resolved = [r for r in recs[1:] if r.global_err >= RESOLVED]
    assert len(resolved) >= 2
    for r in resolved:
        assert r.global_order >= 2 * s - 0.4


def test_config_rejects_nondividing_step():
    with pytest.raises(ValueError, match="divide"):
        IntegratorConfig(make_rule("gauss", 1), "classical", None, 0.3)
    with pytest.raises(ValueError):
        IntegratorConfig(make_rule("gauss", 1), "classical", None, 0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(make_rule("gauss", 1), "explicit", None, 0.1)
    with pytest.raises(ValueError):
        IntegratorConfig(make_rule("gauss", 1), "corrected", 0, 0.1)


def test_config_default_depth():
    assert IntegratorConfig(make_rule("gauss", 3)).depth == 6
    assert IntegratorConfig(make_rule("trapezoidal")).depth == 2
    assert IntegratorConfig(make_rule("simpson")).depth == 4
    assert IntegratorConfig(make_rule("gauss", 3), p=2).depth == 2


def test_depth_beyond_problem_support():
    with pytest.raises(ValueError, match="exceeds"):
        Stepper(FD, make_problem("exp"), make_rule("gauss", 2), "corrected", 20)


def test_stepper_rejects_bad_state():
    st = Stepper(FD, make_problem("exp"), make_rule("gauss", 1), "classical")
    with pytest.raises(ValueError):
        st(np.ones(3), 0.0, 0.1)
    with pytest.raises(ValueError):
        st(np.ones(FD.dim), 0.0, -0.1)


def test_parse_stepsizes():
    assert parse_stepsizes("1/10, 1/20,0.025") == [Fraction(1, 10), Fraction(1, 20), Fraction(1, 40)]
    for bad in ("", "0", "-1/2"):
        with pytest.raises(ValueError):
            parse_stepsizes(bad)
