"""
Exceptions shared by every package.

Library code raises these; only the outer surfaces (cli, server) translate
them into exit codes or HTTP statuses.
"""


class DomainError(ValueError):
    """A wavelength or temperature lies outside a model's validity domain."""


class NoSolutionError(DomainError):
    """No phase-matching root could be bracketed."""


class NoQuasiPhaseMatchingError(DomainError):
    """The combined index difference does not allow a positive period."""


class ResolutionError(ValueError):
    """A quadrature grid is too coarse for the phase it has to follow."""


class PreconditionError(ValueError):
    """Input violates an operation's precondition."""


class InsufficientDataError(PreconditionError):
    """Too few data points for the requested fit."""


class DegenerateOutputError(ValueError):
    """The computation produced an all-zero result."""


class AllFilteredError(ValueError):
    """Spectral filters removed (practically) the whole spectrum."""


class DisjointSupportError(ValueError):
    """Two sampled curves share no common support."""


class ConfigurationError(ValueError):
    """A run configuration or analysis window is unusable."""


class DataFormatError(ValueError):
    """A file could not be parsed."""

    def __init__(self, message: str, path=None, line: int = None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = f'{path}'
            if line is not None:
                where += f':{line}'
            where += ': '
        super().__init__(f'{where}{message}')


class FitFailure(RuntimeError):
    """
    A least-squares fit did not converge or had nothing to fit.

    Carries the best parameters seen so far, the cost trace and the residual
    (root-mean-square of weighted residuals) of the best point.
    """

    def __init__(self, message: str, best_params=None, trace=None,
                 residual: float = None):
        super().__init__(message)
        self.best_params = best_params
        self.trace = list(trace) if trace is not None else []
        self.residual = residual


class ExtrapolationWarning(UserWarning):
    """A model was evaluated outside the range its data supports."""
