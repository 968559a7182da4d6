"""Game constants, the payoff table and the stage expected values.

Everything here is a pure function of a validated :class:`ModelParams`.
Functions taking an offer ``c`` and a demand ``d`` accept floats or numpy
arrays (broadcast together) and return the same kind.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Mapping, Optional

import numpy as np

from .errors import ConstraintViolation, DomainError, MissingBeta

PARAM_NAMES = ("a", "q0", "q1", "w1", "w2", "x", "y", "z")
MONEY_FIELDS = ("w1", "w2", "x", "y", "z")

REL_TOL = 1e-9
ABS_TOL = 1e-12


def close(u: float, v: float) -> bool:
    """Equality test used when comparing expected values."""
    return math.isclose(u, v, rel_tol=REL_TOL, abs_tol=ABS_TOL)


def _violations(a, q0, q1, w1, w2, x, y, z, beta) -> list[str]:
    found = []
    if not 0 < a < 1:
        found.append(f"0 < a < 1 (got a={a!r})")
    if not 0 < q0 < 1:
        found.append(f"0 < q0 < 1 (got q0={q0!r})")
    if not 0 < q1 < 1:
        found.append(f"0 < q1 < 1 (got q1={q1!r})")
    for name, value in (("w1", w1), ("w2", w2), ("x", x), ("y", y), ("z", z)):
        if not (value > 0 and math.isfinite(value)):
            found.append(f"{name} > 0 (got {name}={value!r})")
    if not z >= x:
        found.append(f"z >= x (got z={z!r}, x={x!r})")
    if beta is not None and not (beta >= 0 and math.isfinite(beta)):
        found.append(f"beta >= 0 (got beta={beta!r})")
    return found


@dataclass(frozen=True)
class ModelParams:
    """Constants of the asymmetric kidnapping game.

    ``q0``/``q1`` are the capture probabilities after release/execution,
    ``w1``/``w2`` the family's loss on execution with the kidnapper at
    large/caught, and ``x``, ``y``, ``z`` the kidnapper's losses when caught
    after release, free after execution and caught after execution.
    ``beta`` is only used by :func:`alpha_extended`.

    Construction validates every constraint and raises
    :class:`ConstraintViolation` listing all failures.
    """

    a: float
    q0: float
    q1: float
    w1: float
    w2: float
    x: float
    y: float
    z: float
    beta: Optional[float] = None

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if value is None and f.name == "beta":
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
                raise ConstraintViolation([f"{f.name} must be a real number (got {value!r})"])
            object.__setattr__(self, f.name, float(value))
        found = _violations(self.a, self.q0, self.q1, self.w1, self.w2,
                            self.x, self.y, self.z, self.beta)
        if found:
            raise ConstraintViolation(found)

    @property
    def execution_loss(self) -> float:
        """Family's expected loss if the hostage is executed, ``(1-q1) w1 + q1 w2``.

        Written as ``w1 - q1 (w1 - w2)`` so that ``w1 == w2`` yields ``w1`` exactly.
        """
        return self.w1 - self.q1 * (self.w1 - self.w2)

    @property
    def symmetric(self) -> bool:
        return self.q0 == self.q1 and self.w1 == self.w2

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def scaled(self, factor: float) -> "ModelParams":
        """Multiply every monetary constant by ``factor``."""
        return self.replace(**{name: getattr(self, name) * factor for name in MONEY_FIELDS})

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def validate_params(raw: Mapping[str, Any] | ModelParams) -> ModelParams:
    """Build a :class:`ModelParams` from a mapping, reporting every problem at once.

    Keys are case-insensitive (``W1`` and ``w1`` are the same key).
    """
    if isinstance(raw, ModelParams):
        return raw
    values = {}
    problems = []
    for key, value in raw.items():
        name = str(key).lower()
        if name not in PARAM_NAMES and name != "beta":
            problems.append(f"unknown parameter {key!r}")
            continue
        values[name] = value
    for name in PARAM_NAMES:
        if name not in values:
            problems.append(f"missing parameter {name}")
    if problems:
        raise ConstraintViolation(problems)
    return ModelParams(**values)


class OutcomeTag(Enum):
    NO_KIDNAP = "no_kidnap"
    RELEASED_NOT_CAUGHT = "released_not_caught"
    RELEASED_CAUGHT = "released_caught"
    EXECUTED_NOT_CAUGHT = "executed_not_caught"
    EXECUTED_CAUGHT = "executed_caught"


@dataclass(frozen=True)
class Outcome:
    """A terminal node of the game tree. Only a paid release carries a ransom."""

    tag: OutcomeTag
    ransom: Optional[float] = None

    def __post_init__(self):
        if self.tag is OutcomeTag.RELEASED_NOT_CAUGHT:
            if self.ransom is None or np.any(np.asarray(self.ransom) < 0):
                raise DomainError("a paid release needs a ransom C >= 0")
        elif self.ransom is not None:
            raise DomainError(f"{self.tag.value} carries no ransom")


@dataclass(frozen=True)
class PayoffPair:
    k: Any
    f: Any


def payoff(p: ModelParams, o: Outcome) -> PayoffPair:
    """Kidnapper and family utilities at a terminal outcome."""
    tag = o.tag
    if tag is OutcomeTag.NO_KIDNAP:
        return PayoffPair(0.0, 0.0)
    if tag is OutcomeTag.RELEASED_NOT_CAUGHT:
        return PayoffPair(o.ransom, -o.ransom)
    if tag is OutcomeTag.RELEASED_CAUGHT:
        # the ransom is recovered and returned to the family
        return PayoffPair(-p.x, 0.0)
    if tag is OutcomeTag.EXECUTED_NOT_CAUGHT:
        return PayoffPair(-p.y, -p.w1)
    return PayoffPair(-p.z, -p.w2)


def _as_result(value, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(value)
    return value


def _check_offer(c, d):
    c_arr = np.asarray(c, dtype=float)
    d_arr = np.asarray(d, dtype=float)
    if np.any(~(d_arr > 0)):
        raise DomainError("demand D must be positive")
    if np.any(~(c_arr >= 0)):
        raise DomainError("offer C must be nonnegative")
    if np.any(c_arr > d_arr):
        raise DomainError("offer C must not exceed demand D")
    return c_arr, d_arr


def alpha(p: ModelParams, c, d):
    """Probability of a non-rational execution, ``a (1 - C/D)``."""
    c_arr, d_arr = _check_offer(c, d)
    return _as_result(p.a * (1.0 - c_arr / d_arr), c, d)


def alpha_extended(p: ModelParams, c, d):
    """Execution probability with a floor ``a*beta`` that survives full payment.

    Clamped to 1 since ``a (1 + beta)`` may exceed it.
    """
    if p.beta is None:
        raise MissingBeta("alpha_extended needs params with beta set")
    c_arr, d_arr = _check_offer(c, d)
    value = np.minimum(1.0, p.a * (1.0 - c_arr / d_arr + p.beta))
    return _as_result(value, c, d)


def release_value(p: ModelParams, c):
    """Kidnapper's expected payoff from releasing the hostage for ransom ``c``."""
    c_arr = np.asarray(c, dtype=float)
    if np.any(~(c_arr >= 0)):
        raise DomainError("offer C must be nonnegative")
    return _as_result((1.0 - p.q0) * c_arr - p.q0 * p.x, c)


def execute_value(p: ModelParams) -> float:
    """Kidnapper's expected payoff from executing the hostage."""
    return -(1.0 - p.q1) * p.y - p.q1 * p.z


def family_utility(p: ModelParams, c, d):
    """Family's expected utility when it offers ``c`` against demand ``d``.

    Assumes the kidnapper releases whenever he is not executing non-rationally.
    """
    al = np.asarray(alpha(p, c, d))
    c_arr = np.asarray(c, dtype=float)
    value = (1.0 - al) * (1.0 - p.q0) * (-c_arr) - al * p.execution_loss
    return _as_result(value, c, d)


def family_utility_slope(p: ModelParams, c, d):
    """Derivative of :func:`family_utility` with respect to the offer."""
    c_arr, d_arr = _check_offer(c, d)
    value = (-p.a * (1.0 - p.q0) * 2.0 * c_arr / d_arr
             + p.execution_loss * p.a / d_arr
             - (1.0 - p.a) * (1.0 - p.q0))
    return _as_result(value, c, d)


def kidnapper_value_given_offer(p: ModelParams, c, d):
    """Kidnapper's expected payoff once offer ``c`` is on the table.

    After surviving the non-rational draw he picks the better of release and
    execution, so this differs from the release-only value only when
    execution beats release at ``c``.
    """
    al = np.asarray(alpha(p, c, d))
    v1 = execute_value(p)
    rational = np.maximum(np.asarray(release_value(p, c)), v1)
    return _as_result((1.0 - al) * rational + al * v1, c, d)
