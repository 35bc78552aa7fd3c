"""Exception types shared across the package.

Every error raised on a documented failure path derives from ProvarError,
so callers (and the command line front end) can distinguish "the input
violated a contract" from genuine bugs.
"""


class ProvarError(Exception):
    """Base class for all documented failure modes."""


class PolynomialFormatError(ProvarError):
    """Malformed polynomial text: bad header, wrong arity, unparsable line."""


class SeriesError(ProvarError):
    """Invalid truncated-series request (unknown family, bad order, bad params)."""


class IntegrandError(ProvarError):
    """The integrand returned a non-finite value at a quadrature node."""


class NonFiniteResultError(ProvarError):
    """Quadrature accumulation overflowed or otherwise lost finiteness."""


class NotNormalizableError(ProvarError):
    """Total mass is zero or negative; no normalizer exists.

    ``kind`` is "zero" or "negative" so callers can report which axiom died.
    """

    def __init__(self, message, kind):
        super().__init__(message)
        self.kind = kind


class DivergenceError(ProvarError):
    """Total mass came out non-finite; the density does not integrate."""


class VarietyError(ProvarError):
    """Bad variety construction: unknown name or invalid parameters."""


class SamplingBudgetError(ProvarError):
    """Rejection sampling exhausted its proposal budget before emitting n points."""

    def __init__(self, message, accepted, proposed):
        super().__init__(message)
        self.accepted = accepted
        self.proposed = proposed


class SimplexBudgetError(ProvarError):
    """The Rips filtration would exceed the configured simplex budget."""

    def __init__(self, message, count, budget):
        super().__init__(message)
        self.count = count
        self.budget = budget


class UnderdeterminedError(ProvarError):
    """Fewer sample points than basis functions; the fit has no meaning."""


class NumericalError(ProvarError):
    """An eigenvalue or linear-algebra routine failed to converge."""


class CliUsageError(ProvarError):
    """A command-line flag violated a precondition (exit code 2)."""
