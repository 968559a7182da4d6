"""Comparative statics: (q0, q1) sweeps, offer curves and parameter sensitivities."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import ConstraintViolation, DomainError, StepTooLarge
from .model import ModelParams
from .solver import critical_demands, optimal_offer, selten_specialize, solve


@dataclass(frozen=True)
class SweepRecord:
    q0: float
    q1: float
    d1: Optional[float]
    d2: Optional[float]
    d_star: Optional[float]
    v_bar: Optional[float]
    b: Optional[int]
    e: Optional[int]
    applicable: bool


SWEEP_COLUMNS = ("q0", "q1", "d1", "d2", "d_star", "v_bar", "b", "e", "applicable")


def sweep(base: ModelParams, q0_range: Sequence[float], q1_range: Sequence[float]) -> list[SweepRecord]:
    """Solve on every (q0, q1) pair, q0 varying slowest.

    A pair that fails validation yields a record with only q0/q1 filled and
    ``applicable=False``; the sweep carries on.
    """
    records = []
    for q0, q1 in itertools.product(q0_range, q1_range):
        try:
            p = base.replace(q0=q0, q1=q1)
        except ConstraintViolation:
            records.append(SweepRecord(q0, q1, None, None, None, None, None, None, False))
            continue
        policy = critical_demands(p)
        sol = solve(p)
        records.append(SweepRecord(
            q0=p.q0, q1=p.q1, d1=policy.d1, d2=policy.d2, d_star=sol.d_star,
            v_bar=sol.v_bar, b=sol.b, e=sol.e, applicable=sol.closed_form_applicable,
        ))
    return records


@dataclass(frozen=True)
class OfferCurve:
    demands: np.ndarray
    offers: np.ndarray
    selten_offers: np.ndarray


def figure2_data(p: ModelParams, reference_q: float, reference_w: float, d_grid) -> OfferCurve:
    """Optimal offer against demand for ``p`` and for the symmetric reference game.

    The reference game keeps ``a``, ``x``, ``y``, ``z`` from ``p`` and uses the
    given single capture probability and execution loss.
    """
    demands = np.asarray(d_grid, dtype=float)
    if np.any(~(demands > 0)):
        raise DomainError("demands must be positive")
    reference = selten_specialize(p.a, reference_w, p.x, p.y, p.z, reference_q)
    return OfferCurve(demands, optimal_offer(p, demands), optimal_offer(reference, demands))


Sensitive = Literal["q0", "q1", "a", "w1", "w2", "x"]


@dataclass(frozen=True)
class SensitivityReport:
    param: str
    h: float
    d_star_fd: float
    v_bar_fd: float
    d_star_analytic: float
    v_bar_analytic: float

    @property
    def d_star_rel_error(self) -> float:
        return _rel_error(self.d_star_fd, self.d_star_analytic)

    @property
    def v_bar_rel_error(self) -> float:
        return _rel_error(self.v_bar_fd, self.v_bar_analytic)


def _rel_error(approx: float, exact: float) -> float:
    if exact == 0.0:
        return abs(approx)
    return abs(approx - exact) / abs(exact)


def analytic_derivatives(p: ModelParams, param: str) -> tuple[float, float]:
    """Exact partials of the optimal demand and of the equilibrium entry value."""
    a, q0, q1 = p.a, p.q0, p.q1
    loss = p.execution_loss
    share = a / (1.0 + a)
    if param == "q0":
        return share * loss / (1.0 - q0) ** 2, -p.x
    if param == "q1":
        return share * (p.w2 - p.w1) / (1.0 - q0), share * (p.w2 - p.w1)
    if param == "a":
        return loss / ((1.0 + a) ** 2 * (1.0 - q0)), loss / (1.0 + a) ** 2
    if param == "w1":
        return share * (1.0 - q1) / (1.0 - q0), share * (1.0 - q1)
    if param == "w2":
        return share * q1 / (1.0 - q0), share * q1
    if param == "x":
        return 0.0, -q0
    raise ValueError(f"no sensitivity for parameter {param!r}")


def sensitivity(p: ModelParams, param: Sensitive, h: float) -> SensitivityReport:
    """Central differences of the optimal demand and entry value next to the exact partials."""
    d_exact, v_exact = analytic_derivatives(p, param)
    value = getattr(p, param)
    try:
        up = solve(p.replace(**{param: value + h}))
        down = solve(p.replace(**{param: value - h}))
    except ConstraintViolation as exc:
        raise StepTooLarge(f"{param} +/- {h} leaves the valid region: {exc}") from exc
    return SensitivityReport(
        param=param,
        h=h,
        d_star_fd=(up.d_star - down.d_star) / (2.0 * h),
        v_bar_fd=(up.v_bar - down.v_bar) / (2.0 * h),
        d_star_analytic=d_exact,
        v_bar_analytic=v_exact,
    )
