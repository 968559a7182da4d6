"""Equilibrium toolkit for the kidnapping game with outcome-dependent capture probabilities."""

from .errors import (
    ClosedFormInapplicable,
    ConstraintViolation,
    DomainError,
    IncomparableRegime,
    MissingBeta,
    StepTooLarge,
)
from .model import (
    ModelParams,
    Outcome,
    OutcomeTag,
    PayoffPair,
    alpha,
    alpha_extended,
    execute_value,
    family_utility,
    family_utility_slope,
    kidnapper_value_given_offer,
    payoff,
    release_value,
    validate_params,
)
from .solver import (
    EquilibriumSolution,
    OfferPolicy,
    critical_demands,
    equilibrium_entry_value,
    execution_threshold,
    kidnapper_value_of_demand,
    optimal_demand,
    optimal_entry,
    optimal_execution_choice,
    optimal_offer,
    selten_specialize,
    solve,
    unconstrained_offer_peak,
)
from .oracle import (
    ComparisonReport,
    DiscreteEquilibrium,
    GridSpec,
    OutcomeDistribution,
    compare,
    outcome_distribution,
    best_replies,
    rational_execution,
    solve_discretized,
)
from .analysis import (
    OfferCurve,
    SensitivityReport,
    SweepRecord,
    figure2_data,
    sensitivity,
    sweep,
)

__version__ = "0.1.0"
