"""Exception types shared across the package.

Every error that the CLI maps to an exit status derives from
:class:`SeqSpectrumError`.  Numerical failures carry enough payload
(last iterate, residuals, blow-up index) for a caller to diagnose the
run without re-executing it.
"""


class SeqSpectrumError(Exception):
    """Base class for all package errors."""


class ParseError(SeqSpectrumError):
    """Input file or argument does not satisfy the wire format."""


class PreconditionError(SeqSpectrumError):
    """An operation was called outside its documented domain."""


class SingularMatrixError(SeqSpectrumError):
    """Elimination hit a pivot below the relative threshold."""


class ConvergenceError(SeqSpectrumError):
    """An iteration exhausted its budget without meeting its stop rule.

    ``payload`` holds the last iterate / per-root residuals so the failure
    is inspectable.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload


class DivergenceError(SeqSpectrumError):
    """A truncated series shows no decay; the expansion point is invalid."""


class UnboundedTrajectoryError(SeqSpectrumError):
    """A simulated trajectory left the trusted dynamic range."""

    def __init__(self, message, blow_up_index):
        super().__init__(message)
        self.blow_up_index = blow_up_index


#: CLI exit statuses.  0 is success, 1 is reserved for usage/parse errors.
EXIT_PARSE = 1
EXIT_NUMERICAL = 2
EXIT_PRECONDITION = 3


def exit_code_for(exc: SeqSpectrumError) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, PreconditionError):
        return EXIT_PRECONDITION
    return EXIT_NUMERICAL
