"""Exception types shared across the package."""


class ConstraintViolation(ValueError):
    """Raised when model parameters break one or more validity constraints.

    ``violations`` holds one human-readable inequality per failed check.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid parameters: " + "; ".join(self.violations))


class DomainError(ValueError):
    """An offer/demand pair outside ``D > 0, 0 <= C <= D``."""


class MissingBeta(ValueError):
    """The extended execution-probability model was requested without beta."""


class ClosedFormInapplicable(RuntimeError):
    """Rational execution intrudes, so the closed-form equilibrium does not hold."""


class IncomparableRegime(RuntimeError):
    """A closed-form solution flagged inapplicable cannot be checked against the oracle."""


class StepTooLarge(ValueError):
    """A finite-difference step pushes the parameters out of their valid region."""
