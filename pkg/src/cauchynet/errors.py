"""Exception types shared across the library.

Numerical failures are raised eagerly rather than silently saturating, so a
diverging run can be traced to the operation that produced it.
"""


class CauchyNetError(Exception):
    """Base class for all library-specific errors."""


class PoleEncountered(CauchyNetError):
    """A shifted denominator is exactly zero (evaluation at a pole)."""


class NonFiniteError(CauchyNetError):
    """A computation produced NaN or Inf.

    When raised from the training loop, ``epoch`` holds the epoch index at
    which divergence was detected and ``partial_log`` the records completed
    before the failure.
    """

    def __init__(self, message, epoch=None, partial_log=None):
        super().__init__(message)
        self.epoch = epoch
        self.partial_log = partial_log


class SchemaError(CauchyNetError):
    """A serialized document failed validation (version, shape, or fields)."""


class ParseError(CauchyNetError):
    """A CSV or config document could not be parsed."""


class DegenerateRange(CauchyNetError):
    """Min-max scaling was fit on values with zero spread."""


class NonPositiveValue(CauchyNetError):
    """Multiplicative decomposition requires strictly positive data."""


class SingularSystem(CauchyNetError):
    """A regularized least-squares system is still numerically singular."""


class LengthMismatch(CauchyNetError):
    """Paired sequences (predictions/truths) differ in length or are empty."""


class ValidationError(CauchyNetError):
    """An experiment configuration violates a precondition.

    Collected before any compute starts; ``problems`` lists every violation.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        super().__init__("; ".join(problems))
        self.problems = list(problems)
