"""Exception types shared across the package."""


class AddgraphError(Exception):
    """Base class for all package errors."""


class InvalidParams(AddgraphError, ValueError):
    """A precondition on user-supplied parameters was violated."""


class SequenceParseError(InvalidParams):
    """A degree-sequence or edge-list file could not be parsed."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class InfeasiblePair(AddgraphError, ValueError):
    """A strict kernel produced a raw connection probability outside [0, 1]."""


class ParameterMismatch(AddgraphError, ValueError):
    """Kernel parameters disagree with the degree sequence they are used with."""


class IncompatibleSummaries(AddgraphError, ValueError):
    """Two ensemble summaries cannot be merged."""


class InsufficientData(AddgraphError, ValueError):
    """Too few eligible points for a fit."""


class NoEligibleVertices(AddgraphError, ValueError):
    """No vertex has degree >= 2, so mean clustering is undefined."""
