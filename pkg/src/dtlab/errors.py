"""Exception hierarchy shared by all dtlab modules."""


class DtlabError(Exception):
    """Base class for every error raised by dtlab."""


class DomainError(DtlabError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(DtlabError, ArithmeticError):
    """An iterative solver did not reach its tolerance within the iteration cap."""


class CapExceeded(DtlabError, ValueError):
    """A requested exact computation exceeds the configured size cap."""


class DegenerateNodes(DtlabError, ArithmeticError):
    """Interpolation nodes are too close together for the weights to be trusted."""


class LinearAlgebraError(DtlabError, ArithmeticError):
    """A dense eigen/singular value decomposition failed to converge."""
