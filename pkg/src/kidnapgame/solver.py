"""Closed-form backward induction: execution, offer, demand, then entry.

The closed form assumes the kidnapper releases the hostage whenever he is
not executing non-rationally. That holds at every demand exactly when
:func:`execution_threshold` returns ``None``; otherwise the functions that
depend on it raise :class:`ClosedFormInapplicable` and :func:`solve` flags
its result instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import ClosedFormInapplicable
from .model import (
    ModelParams,
    alpha,
    close,
    execute_value,
    kidnapper_value_given_offer,
    release_value,
)


@dataclass(frozen=True)
class OfferPolicy:
    """Breakpoints of the family's optimal offer.

    Demands up to ``d1`` are paid in full; above ``d2`` nothing is offered.
    Calling the policy evaluates :func:`optimal_offer`.
    """

    d1: float
    d2: float
    params: ModelParams

    def __call__(self, d):
        return optimal_offer(self.params, d)


@dataclass(frozen=True)
class EquilibriumSolution:
    """Subgame-perfect equilibrium of the kidnapping game.

    When ``b == 0`` the remaining fields describe the kidnapping subgame that
    is never entered; realized payoffs are then (0, 0).
    """

    b: int
    d_star: float
    offer_at_d_star: float
    e: int
    alpha_star: float
    v0_bar: float
    v1: float
    v_bar: float
    family_value: float
    closed_form_applicable: bool

    def as_record(self) -> dict[str, Any]:
        return {
            "b": self.b,
            "d_star": self.d_star,
            "offer_at_d_star": self.offer_at_d_star,
            "e": self.e,
            "alpha_star": self.alpha_star,
            "v0_bar": self.v0_bar,
            "v1": self.v1,
            "v_bar": self.v_bar,
            "family_value": self.family_value,
            "applicable": self.closed_form_applicable,
        }


def optimal_execution_choice(p: ModelParams, c: float) -> int:
    """1 if executing beats releasing at offer ``c``; ties release."""
    v0 = release_value(p, c)
    v1 = execute_value(p)
    if v0 >= v1 or close(v0, v1):
        return 0
    return 1


def execution_threshold(p: ModelParams) -> Optional[float]:
    """Smallest offer at which release is weakly optimal, or None if every offer is."""
    v1 = execute_value(p)
    if p.q0 * p.x <= -v1 or close(p.q0 * p.x, -v1):
        return None
    return (p.q0 * p.x + v1) / (1.0 - p.q0)


def closed_form_applicable(p: ModelParams) -> bool:
    return execution_threshold(p) is None


def _require_closed_form(p: ModelParams) -> None:
    threshold = execution_threshold(p)
    if threshold is not None:
        raise ClosedFormInapplicable(
            f"execution beats release for offers below {threshold!r}; use the oracle")


def critical_demands(p: ModelParams) -> OfferPolicy:
    base = p.execution_loss / (1.0 - p.q0)
    return OfferPolicy(d1=p.a / (1.0 + p.a) * base, d2=p.a / (1.0 - p.a) * base, params=p)


def unconstrained_offer_peak(p: ModelParams, d):
    """Stationary point of the family's utility in the offer; may fall outside [0, d]."""
    peak = p.execution_loss / (2.0 * (1.0 - p.q0)) - (1.0 - p.a) * np.asarray(d, dtype=float) / (2.0 * p.a)
    return float(peak) if np.ndim(d) == 0 else peak


def optimal_offer(p: ModelParams, d):
    """Family's best offer against demand ``d`` (full payment, interior peak, or zero)."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)):
        raise ValueError("demand D must be positive")
    policy = critical_demands(p)
    # clip absorbs rounding of the interior peak at the two breakpoints
    interior = np.clip(unconstrained_offer_peak(p, d_arr), 0.0, d_arr)
    offer = np.where(d_arr <= policy.d1, d_arr, np.where(d_arr <= policy.d2, interior, 0.0))
    if np.ndim(d) == 0:
        return float(offer)
    return offer


def kidnapper_value_of_demand(p: ModelParams, d):
    """Kidnapper's expected payoff from demanding ``d``, anticipating the best offer."""
    d_arr = np.asarray(d, dtype=float)
    offer = np.asarray(optimal_offer(p, d_arr))
    v1 = execute_value(p)
    v0_bar = np.asarray(release_value(p, offer))
    if np.any((v0_bar < v1) & ~np.isclose(v0_bar, v1, rtol=1e-9, atol=1e-12)):
        raise ClosedFormInapplicable("execution beats release at the optimal offer for some demand")
    policy = critical_demands(p)
    ratio = p.a * p.execution_loss / ((1.0 - p.q0) * d_arr)
    middle = 0.5 * ((1.0 + p.a) - ratio) * v1 + 0.5 * ((1.0 - p.a) + ratio) * v0_bar
    tail = p.a * v1 + (1.0 - p.a) * (-p.q0 * p.x)
    first = (1.0 - p.q0) * d_arr - p.q0 * p.x
    value = np.where(d_arr <= policy.d1, first, np.where(d_arr <= policy.d2, middle, tail))
    if np.ndim(d) == 0:
        return float(value)
    return value


def optimal_demand(p: ModelParams) -> float:
    """Largest demand the family still pays in full; the kidnapper's unique best demand."""
    _require_closed_form(p)
    return critical_demands(p).d1


def _entry_terms(p: ModelParams) -> tuple[float, float]:
    return p.a * p.execution_loss / (1.0 + p.a), p.q0 * p.x


def equilibrium_entry_value(p: ModelParams) -> float:
    _require_closed_form(p)
    gain, risk = _entry_terms(p)
    return gain - risk


def optimal_entry(p: ModelParams) -> int:
    """1 if kidnapping has positive value at the optimal demand; indifference abstains."""
    _require_closed_form(p)
    gain, risk = _entry_terms(p)
    return int(gain > risk and not close(gain, risk))


def solve(p: ModelParams) -> EquilibriumSolution:
    """Full equilibrium record.

    If the closed form is inapplicable the stage fields are still evaluated
    at the closed-form demand with the kidnapper's rational execution choice
    taken into account, and ``closed_form_applicable`` is False. Those fields
    are the true equilibrium whenever the closed-form demand itself is at or
    above the execution threshold.
    """
    v1 = execute_value(p)
    if closed_form_applicable(p):
        d_star = optimal_demand(p)
        offer = float(optimal_offer(p, d_star))
        return EquilibriumSolution(
            b=optimal_entry(p),
            d_star=d_star,
            offer_at_d_star=offer,
            e=0,
            alpha_star=float(alpha(p, offer, d_star)),
            v0_bar=float(release_value(p, offer)),
            v1=v1,
            v_bar=equilibrium_entry_value(p),
            family_value=-(1.0 - p.q0) * d_star,
            closed_form_applicable=True,
        )

    d_star = critical_demands(p).d1
    offer = float(optimal_offer(p, d_star))
    e = optimal_execution_choice(p, offer)
    al = float(alpha(p, offer, d_star))
    v_bar = float(kidnapper_value_given_offer(p, offer, d_star))
    released = -(1.0 - p.q0) * offer if e == 0 else -p.execution_loss
    return EquilibriumSolution(
        b=int(v_bar > 0 and not close(v_bar, 0.0)),
        d_star=d_star,
        offer_at_d_star=offer,
        e=e,
        alpha_star=al,
        v0_bar=float(release_value(p, offer)),
        v1=v1,
        v_bar=v_bar,
        family_value=(1.0 - al) * released - al * p.execution_loss,
        closed_form_applicable=False,
    )


def selten_specialize(a: float, w: float, x: float, y: float, z: float, q: float,
                      beta: Optional[float] = None) -> ModelParams:
    """Parameters of the original symmetric game (one capture probability, one loss)."""
    return ModelParams(a=a, q0=q, q1=q, w1=w, w2=w, x=x, y=y, z=z, beta=beta)
