class GpiError(Exception):
    """Base class for every failure raised by the gpi app."""


class GraphFormatError(GpiError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AssumptionViolation(GpiError):
    """The graph or parameters break a standing assumption of the algorithm."""


class EigenSolverError(GpiError):
    def __init__(self, message, residual=None, matrix=None):
        self.residual = residual
        self.matrix = matrix
        super().__init__(message)


class MatrixExpError(GpiError):
    pass


class RankDeficientBasis(GpiError):
    pass


class DegenerateSubspace(GpiError):
    """Two spanning vectors are parallel, so a 2-d subspace is undefined."""


class NonUnitVector(GpiError, ValueError):
    pass


class ObserverFailure(GpiError):
    def __init__(self, message, node=None, k=None):
        self.node = node
        self.k = k
        super().__init__(message)


class LocalityViolation(GpiError):
    pass


class NonConvergence(GpiError):
    """Raised when max_iter is exhausted; ``result`` holds the partial run."""

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)
