import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sampling import P_STAR, params, random_params

from kidnapgame import (
    DomainError,
    GridSpec,
    IncomparableRegime,
    ModelParams,
    Outcome,
    OutcomeTag,
    compare,
    execute_value,
    execution_threshold,
    family_utility,
    payoff,
    rational_execution,
    selten_specialize,
    solve,
    solve_discretized,
)
from kidnapgame import outcome_distribution as dist_of

TAGS = list(OutcomeTag)


class TestOutcomeDistribution:
    def test_no_kidnap(self, p_star):
        dist = dist_of(p_star, 0)
        assert dist.probabilities[OutcomeTag.NO_KIDNAP] == 1
        assert (dist.expected.k, dist.expected.f) == (0, 0)

    def test_full_payment(self, p_star):
        dist = dist_of(p_star, 1, 40.0, 40.0, 0)
        assert dist.probabilities[OutcomeTag.RELEASED_NOT_CAUGHT] == pytest.approx(0.8)
        assert dist.probabilities[OutcomeTag.RELEASED_CAUGHT] == pytest.approx(0.2)
        assert dist.probabilities[OutcomeTag.EXECUTED_CAUGHT] == 0
        assert dist.probabilities[OutcomeTag.EXECUTED_NOT_CAUGHT] == 0

    def test_partial_payment(self, p_star):
        dist = dist_of(p_star, 1, 60.0, 30.0, 0)
        expected = {
            OutcomeTag.RELEASED_NOT_CAUGHT: 0.6,
            OutcomeTag.RELEASED_CAUGHT: 0.15,
            OutcomeTag.EXECUTED_NOT_CAUGHT: 0.1,
            OutcomeTag.EXECUTED_CAUGHT: 0.15,
            OutcomeTag.NO_KIDNAP: 0.0,
        }
        for tag, prob in expected.items():
            assert dist.probabilities[tag] == pytest.approx(prob, abs=1e-15)
        assert dist.expected.f == pytest.approx(-37)
        assert dist.expected.f == pytest.approx(family_utility(p_star, 30, 60), rel=1e-12)

    def test_rational_execution_kills_outright(self, p_star):
        dist = dist_of(p_star, 1, 60.0, 30.0, 1)
        executed = dist.probabilities[OutcomeTag.EXECUTED_NOT_CAUGHT] + dist.probabilities[OutcomeTag.EXECUTED_CAUGHT]
        assert executed == pytest.approx(1.0)

    def test_domain(self, p_star):
        with pytest.raises(DomainError):
            dist_of(p_star, 1, 10.0, 11.0, 0)

    @given(params(beta=True), st.floats(0.5, 300), st.floats(0, 1), st.sampled_from([0, 1]),
           st.sampled_from(["standard", "extended"]))
    def test_probabilities_and_expectations(self, p, d, frac, e, model):
        c = frac * d
        dist = dist_of(p, 1, d, c, e, model)
        probs = dist.probabilities
        assert all(0 <= probs[t] <= 1 for t in TAGS)
        assert dist.total() == pytest.approx(1.0, abs=1e-12)
        rows = {t: payoff(p, Outcome(t, c if t is OutcomeTag.RELEASED_NOT_CAUGHT else None)) for t in TAGS}
        assert dist.expected.k == sum(probs[t] * rows[t].k for t in TAGS)
        assert dist.expected.f == sum(probs[t] * rows[t].f for t in TAGS)

    def test_vectorized_matches_scalar(self, p_star):
        d = np.array([[20.0], [60.0]])
        c = d * np.array([0.0, 0.5, 1.0])
        grid = dist_of(p_star, 1, d, c, 0)
        for i in range(2):
            for j in range(3):
                single = dist_of(p_star, 1, float(d[i, 0]), float(c[i, j]), 0)
                assert grid.expected.k[i, j] == single.expected.k
                assert grid.expected.f[i, j] == single.expected.f

    def test_extended_floor(self):
        p = ModelParams(**{**P_STAR, "beta": 0.1})
        dist = dist_of(p, 1, 50.0, 50.0, 0, "extended")
        executed = dist.probabilities[OutcomeTag.EXECUTED_NOT_CAUGHT] + dist.probabilities[OutcomeTag.EXECUTED_CAUGHT]
        assert executed == pytest.approx(0.05)


class TestGridSpec:
    def test_steps(self):
        g = GridSpec(120, 481, 481)
        assert g.d_step == 0.25
        demands = g.demands()
        assert demands[0] == 0.25 and demands[-1] == 120 and len(demands) == 480
        offers = g.offers(np.array([60.0]))[0]
        assert offers[0] == 0 and offers[-1] == 60 and len(offers) == 481

    @pytest.mark.parametrize("kwargs", [
        dict(d_max=0, d_steps=10, c_steps=10),
        dict(d_max=10, d_steps=1, c_steps=10),
        dict(d_max=10, d_steps=10, c_steps=1),
        dict(d_max=10, d_steps=10, c_steps=10, alpha_model="other"),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)

    def test_bracketing(self, p_star):
        g = GridSpec.bracketing(p_star)
        assert g.d_max == pytest.approx(1.5 * 95)
        assert g.d_step <= 95 / 400 * (1 + 1e-12)


class TestSolveDiscretized:
    def test_fixture(self, p_star):
        disc = solve_discretized(p_star, GridSpec(120, 481, 481))
        assert abs(disc.d_value - 95 / 3) <= 0.25
        assert disc.c_value == disc.d_value
        assert (disc.e, disc.b) == (0, 1)
        expected = dist_of(p_star, 1, disc.d_value, disc.c_value, disc.e).expected
        assert (disc.k_value, disc.f_value) == (expected.k, expected.f)

    def test_selten(self):
        p = selten_specialize(0.4, 70, 40, 10, 50, 0.3)
        disc = solve_discretized(p, GridSpec(120, 481, 481))
        assert abs(disc.d_value - 28.5714) <= 0.25

    def test_deterministic(self, p_star):
        g = GridSpec.bracketing(p_star)
        assert solve_discretized(p_star, g) == solve_discretized(p_star, g)

    def test_reversed_regime_executes_small_offers(self):
        p = ModelParams(**{**P_STAR, "q0": 0.9, "q1": 0.1})
        offers = np.linspace(0, 300, 301)
        e = rational_execution(p, 300.0, offers)
        assert np.all(e[offers < 219.99] == 1) and np.all(e[offers > 220.01] == 0)

    def test_reversed_regime_equilibrium(self):
        # the threshold (220) sits below the lower critical demand (320), so the grid
        # equilibrium still lands on full payment at that demand
        p = ModelParams(**{**P_STAR, "q0": 0.9, "q1": 0.1})
        sol = solve(p)
        g = GridSpec(1500, 1501, 1501)
        disc = solve_discretized(p, g)
        assert not sol.closed_form_applicable
        assert abs(disc.d_value - sol.d_star) <= g.d_step
        assert disc.c_value == disc.d_value and disc.e == 0 and disc.b == sol.b == 0
        assert disc.k_value == pytest.approx(sol.v_bar, abs=(1 - p.q0) * g.d_step)

    def test_threshold_above_lower_critical_demand(self):
        p = ModelParams(a=0.5, q0=0.95, q1=0.05, w1=100, w2=60, x=150, y=10, z=150)
        disc = solve_discretized(p, GridSpec.bracketing(p))
        # execution is the best the kidnapper can do, so the smallest demand wins the tie
        assert disc.d_index == 0 and disc.e == 1 and disc.c_value == 0
        assert disc.k_value == pytest.approx(execute_value(p), rel=1e-12)
        assert disc.b == solve(p).b == 0

    @given(params(beta=True))
    @settings(max_examples=10, deadline=None)
    def test_extended_model_with_zero_beta(self, p):
        g = GridSpec.bracketing(p, 121, 121, "standard")
        ext = GridSpec.bracketing(p, 121, 121, "extended")
        assert solve_discretized(p.replace(beta=0.0), ext) == solve_discretized(p, g)

    def test_extended_model_lowers_value(self):
        p = ModelParams(**{**P_STAR, "beta": 0.2})
        std = solve_discretized(p, GridSpec.bracketing(p, 301, 301))
        ext = solve_discretized(p, GridSpec.bracketing(p, 301, 301, "extended"))
        assert ext.k_value < std.k_value


class TestCompare:
    def test_fixture_passes(self, p_star):
        g = GridSpec(120, 481, 481)
        report = compare(solve(p_star), solve_discretized(p_star, g), g, p_star)
        assert report.passed, report.as_record()

    def test_inapplicable(self):
        p = ModelParams(**{**P_STAR, "q0": 0.9, "q1": 0.1})
        g = GridSpec.bracketing(p, 101, 101)
        with pytest.raises(IncomparableRegime):
            compare(solve(p), solve_discretized(p, g), g, p)

    def test_record_contains_checks(self, p_star):
        g = GridSpec(120, 121, 121)
        record = compare(solve(p_star), solve_discretized(p_star, g), g, p_star).as_record()
        assert {"demand_ok", "reply_ok", "offer_ok", "value_ok", "entry_ok", "execution_ok", "passed"} <= set(record)


@pytest.mark.parametrize("seed", range(8))
def test_refinement_keeps_gaps_within_one_step(seed):
    rng = np.random.default_rng(seed)
    p = random_params(rng, "q1>=q0")
    closed = solve(p)
    for steps in (201, 401):
        g = GridSpec.bracketing(p, steps, steps)
        disc = solve_discretized(p, g)
        report = compare(closed, disc, g, p)
        assert report.d_gap <= g.d_step
        assert report.reply_gap <= g.c_step(disc.d_value)
        # the achieved value never beats the closed form by more than the Lipschitz slack
        assert disc.k_value <= closed.v_bar + report.value_bound


@given(params(q_order="q1>=q0"))
@settings(max_examples=15, deadline=None)
def test_oracle_agrees_with_closed_form(p):
    assume(execution_threshold(p) is None)
    g = GridSpec.bracketing(p, 301, 301)
    closed = solve(p)
    report = compare(closed, solve_discretized(p, g), g, p)
    # entry can legitimately differ when the value sits within the grid slack of zero
    assume(abs(closed.v_bar) > report.value_bound)
    assert report.passed, report.as_record()
