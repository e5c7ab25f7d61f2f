"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CutoffError(ValueError):
    """The transition frequency is not below a required guide cutoff.

    ``family`` names the mode family whose cutoff is violated.
    """

    def __init__(self, message, family=None):
        super().__init__(message)
        self.family = family


class RootFindingError(RuntimeError):
    """A Bessel zero could not be bracketed or polished."""


class ConvergenceError(RuntimeError):
    """An iterative evaluation did not reach its tolerance.

    ``mode_index`` is set when the failure belongs to a single guide mode.
    """

    def __init__(self, message, mode_index=None):
        super().__init__(message)
        self.mode_index = mode_index
