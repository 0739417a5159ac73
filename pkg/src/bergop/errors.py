"""Exception hierarchy for the bergop package.

Every failure mode that callers are expected to handle gets its own class, so
that scripts can distinguish "your input was bad" from "the numerics did not
converge" without parsing messages.
"""


class BergopError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(BergopError, ValueError):
    """A constructor or builder received parameters outside its admissible range."""


class DomainError(BergopError, ValueError):
    """A point outside the open unit disc was passed where |z| < 1 is required."""


class QuadratureError(BergopError):
    """An adaptive quadrature failed to reach the requested tolerance.

    The best available estimate is kept on the exception so callers can
    inspect how far off the run was.
    """

    def __init__(self, message, estimate=None, achieved_rtol=None):
        super().__init__(message)
        self.estimate = estimate
        self.achieved_rtol = achieved_rtol


class EvaluationError(BergopError):
    """An integrand returned a non-finite value at an identified node."""


class AliasingError(BergopError, ValueError):
    """An angular Fourier mode beyond the Nyquist limit of the rule was requested."""


class DegenerateDerivativeError(BergopError):
    """The analytic derivative vanishes where a Beltrami quotient is needed."""


class DegenerateSymbolError(BergopError):
    """A symbol's Jacobian vanishes (or changes sign) on the evaluation grid."""


class ConditioningError(BergopError):
    """A Gram matrix is numerically singular beyond the stabilization cutoff."""


class TuningError(BergopError):
    """Root bracketing for the counterexample profile tuning failed.

    Carries the bracket diagnostics that were seen before giving up.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class IncompleteLedgerError(BergopError):
    """A certificate was requested from a constants ledger with missing entries."""
