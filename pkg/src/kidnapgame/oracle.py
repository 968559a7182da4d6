"""Brute-force equilibrium of the discretized game tree.

Expected payoffs come only from the outcome probabilities of the tree
(chance nodes for non-rational execution and for capture) weighted by the
payoff table; none of the closed-form utility or value formulas are used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from .errors import IncomparableRegime
from .model import (
    ModelParams,
    Outcome,
    OutcomeTag,
    PayoffPair,
    alpha,
    alpha_extended,
    payoff,
)
from .solver import EquilibriumSolution, critical_demands, optimal_offer

AlphaModel = Literal["standard", "extended"]

# rows of the demand grid evaluated per numpy batch
_CHUNK = 128


@dataclass(frozen=True)
class GridSpec:
    """Discretization of the demand and offer choices.

    Demands are ``j * d_max / (d_steps - 1)`` for ``j = 1 .. d_steps - 1``
    (zero is not a demand). Offers at demand ``D`` are ``c_steps`` evenly
    spaced points on ``[0, D]``, both ends included.
    """

    d_max: float
    d_steps: int
    c_steps: int
    alpha_model: AlphaModel = "standard"

    def __post_init__(self):
        if not self.d_max > 0:
            raise ValueError(f"d_max must be positive, got {self.d_max!r}")
        if int(self.d_steps) != self.d_steps or self.d_steps < 2:
            raise ValueError(f"d_steps must be an integer >= 2, got {self.d_steps!r}")
        if int(self.c_steps) != self.c_steps or self.c_steps < 2:
            raise ValueError(f"c_steps must be an integer >= 2, got {self.c_steps!r}")
        if self.alpha_model not in ("standard", "extended"):
            raise ValueError(f"unknown alpha model {self.alpha_model!r}")

    @classmethod
    def bracketing(cls, p: ModelParams, d_steps: int = 601, c_steps: int = 601,
                   alpha_model: AlphaModel = "standard") -> "GridSpec":
        """Grid reaching 1.5x the upper critical demand, beyond which the value is flat."""
        return cls(1.5 * critical_demands(p).d2, d_steps, c_steps, alpha_model)

    @property
    def d_step(self) -> float:
        return self.d_max / (self.d_steps - 1)

    def demands(self) -> np.ndarray:
        return self.d_step * np.arange(1, self.d_steps)

    def offers(self, d) -> np.ndarray:
        """Offer grid for each demand; shape ``d.shape + (c_steps,)``."""
        return np.asarray(d, dtype=float)[..., None] * np.linspace(0.0, 1.0, self.c_steps)

    def c_step(self, d: float) -> float:
        return d / (self.c_steps - 1)


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of the five terminal outcomes and the expected payoffs."""

    probabilities: dict[OutcomeTag, Any]
    expected: PayoffPair

    def total(self):
        return sum(self.probabilities.values())


@dataclass(frozen=True)
class DiscreteEquilibrium:
    """Grid equilibrium. ``k_value``/``f_value`` are the kidnapping-subgame
    expectations at the chosen profile, also when ``b == 0``."""

    b: int
    d_index: int
    d_value: float
    c_index: int
    c_value: float
    e: int
    k_value: float
    f_value: float


def _execution_probability(p: ModelParams, c, d, model: AlphaModel):
    if model == "extended":
        return np.asarray(alpha_extended(p, c, d))
    return np.asarray(alpha(p, c, d))


def outcome_distribution(p: ModelParams, b: int, d=None, c=None, e=0,
                         model: AlphaModel = "standard") -> OutcomeDistribution:
    """Exact distribution over terminal outcomes for a pure profile.

    ``d``, ``c`` and ``e`` may be arrays; they broadcast together.
    """
    if b == 0:
        probs = {tag: 0.0 for tag in OutcomeTag}
        probs[OutcomeTag.NO_KIDNAP] = 1.0
        return OutcomeDistribution(probs, payoff(p, Outcome(OutcomeTag.NO_KIDNAP)))

    c_arr = np.asarray(c, dtype=float)
    nonrational = _execution_probability(p, c_arr, d, model)
    e_arr = np.asarray(e, dtype=float)
    released = (1.0 - nonrational) * (1.0 - e_arr)
    executed = nonrational + (1.0 - nonrational) * e_arr
    probs = {
        OutcomeTag.NO_KIDNAP: np.zeros_like(released),
        OutcomeTag.RELEASED_NOT_CAUGHT: released * (1.0 - p.q0),
        OutcomeTag.RELEASED_CAUGHT: released * p.q0,
        OutcomeTag.EXECUTED_NOT_CAUGHT: executed * (1.0 - p.q1),
        OutcomeTag.EXECUTED_CAUGHT: executed * p.q1,
    }
    rows = {
        OutcomeTag.NO_KIDNAP: payoff(p, Outcome(OutcomeTag.NO_KIDNAP)),
        OutcomeTag.RELEASED_NOT_CAUGHT: payoff(p, Outcome(OutcomeTag.RELEASED_NOT_CAUGHT, c_arr)),
        OutcomeTag.RELEASED_CAUGHT: payoff(p, Outcome(OutcomeTag.RELEASED_CAUGHT)),
        OutcomeTag.EXECUTED_NOT_CAUGHT: payoff(p, Outcome(OutcomeTag.EXECUTED_NOT_CAUGHT)),
        OutcomeTag.EXECUTED_CAUGHT: payoff(p, Outcome(OutcomeTag.EXECUTED_CAUGHT)),
    }
    k = sum(probs[tag] * rows[tag].k for tag in OutcomeTag)
    f = sum(probs[tag] * rows[tag].f for tag in OutcomeTag)
    if np.ndim(k) == 0:
        probs = {tag: float(v) for tag, v in probs.items()}
        k, f = float(k), float(f)
    return OutcomeDistribution(probs, PayoffPair(k, f))


def _strictly_greater(u, v):
    return (u > v) & ~np.isclose(u, v, rtol=1e-9, atol=1e-12)


def rational_execution(p: ModelParams, d, c, model: AlphaModel = "standard"):
    """Kidnapper's choice at the execution node: 1 where executing pays strictly more."""
    keep = outcome_distribution(p, 1, d, c, 0, model).expected.k
    kill = outcome_distribution(p, 1, d, c, 1, model).expected.k
    return _strictly_greater(np.asarray(kill), np.asarray(keep)).astype(int)


def best_replies(p: ModelParams, g: GridSpec, demands: np.ndarray):
    """Family's grid best reply for each demand.

    Returns offer indices, offers, execution choices and the two expected
    payoffs at the reply, one entry per demand.
    """
    offers = g.offers(demands)
    d_col = demands[:, None]
    e = rational_execution(p, d_col, offers, g.alpha_model)
    expected = outcome_distribution(p, 1, d_col, offers, e, g.alpha_model).expected
    # argmax returns the first maximum: the smallest offer among ties
    c_idx = np.argmax(expected.f, axis=1)
    rows = np.arange(len(demands))
    return c_idx, offers[rows, c_idx], e[rows, c_idx], expected.k[rows, c_idx], expected.f[rows, c_idx]


def solve_discretized(p: ModelParams, g: GridSpec) -> DiscreteEquilibrium:
    """Exhaustive backward induction over the grid.

    Ties go to release, to the smallest offer, to the smallest demand and to
    not kidnapping.
    """
    demands = g.demands()
    parts = [best_replies(p, g, demands[i:i + _CHUNK]) for i in range(0, len(demands), _CHUNK)]
    c_idx, c_val, e, k, f = (np.concatenate(cols) for cols in zip(*parts))
    j = int(np.argmax(k))
    k_value = float(k[j])
    return DiscreteEquilibrium(
        b=int(k_value > 0 and not np.isclose(k_value, 0.0, rtol=0.0, atol=1e-12)),
        d_index=j,
        d_value=float(demands[j]),
        c_index=int(c_idx[j]),
        c_value=float(c_val[j]),
        e=int(e[j]),
        k_value=k_value,
        f_value=float(f[j]),
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Field-by-field agreement between the closed form and the grid oracle.

    ``reply_gap`` compares the oracle's offer with the closed-form best reply
    at the oracle's own demand; ``offer_gap`` compares the two equilibrium
    offers, which also absorbs the demand discretization.
    """

    d_gap: float
    d_step: float
    reply_gap: float
    offer_gap: float
    c_step: float
    offer_bound: float
    value_gap: float
    value_bound: float
    b_match: bool
    e_match: bool

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "demand": self.d_gap <= self.d_step,
            "reply": self.reply_gap <= self.c_step,
            "offer": self.offer_gap <= self.offer_bound,
            "value": self.value_gap <= self.value_bound,
            "entry": self.b_match,
            "execution": self.e_match,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def as_record(self) -> dict[str, Any]:
        record = {
            "d_gap": self.d_gap,
            "d_step": self.d_step,
            "reply_gap": self.reply_gap,
            "offer_gap": self.offer_gap,
            "c_step": self.c_step,
            "offer_bound": self.offer_bound,
            "value_gap": self.value_gap,
            "value_bound": self.value_bound,
            "b_match": self.b_match,
            "e_match": self.e_match,
        }
        record.update({f"{name}_ok": ok for name, ok in self.checks.items()})
        record["passed"] = self.passed
        return record


def compare(closed: EquilibriumSolution, disc: DiscreteEquilibrium, g: GridSpec,
            p: ModelParams) -> ComparisonReport:
    """Check a closed-form solution against the oracle run on the same params.

    The value bound is Lipschitz: slope ``1 - q0`` in the demand plus the
    kidnapper's marginal value of the offer near full payment.
    """
    if not closed.closed_form_applicable:
        raise IncomparableRegime("closed form is flagged inapplicable for these params")
    h_d = g.d_step
    h_c = g.c_step(disc.d_value)
    offer_slope = max(1.0, (1.0 - p.a) / (2.0 * p.a))
    offer_value_slope = (1.0 - p.q0) + p.a * (closed.v0_bar - closed.v1) / closed.d_star
    return ComparisonReport(
        d_gap=abs(closed.d_star - disc.d_value),
        d_step=h_d,
        reply_gap=abs(float(optimal_offer(p, disc.d_value)) - disc.c_value),
        offer_gap=abs(closed.offer_at_d_star - disc.c_value),
        c_step=h_c,
        offer_bound=h_c + offer_slope * h_d,
        value_gap=abs(closed.v_bar - disc.k_value),
        value_bound=(1.0 - p.q0) * h_d + offer_value_slope * h_c,
        b_match=closed.b == disc.b,
        e_match=closed.e == disc.e,
    )
