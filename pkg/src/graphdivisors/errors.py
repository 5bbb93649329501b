"""Exception types raised across the package.

Every error message names the offending element (vertex, edge, flag,
size) so failures are actionable without a debugger.
"""


class GraphDivisorsError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateVertexError(GraphDivisorsError):
    pass


class LoopEdgeError(GraphDivisorsError):
    pass


class DuplicateEdgeError(GraphDivisorsError):
    pass


class UnknownEndpointError(GraphDivisorsError):
    pass


class DisconnectedError(GraphDivisorsError):
    pass


class ParameterOutOfRangeError(GraphDivisorsError):
    pass


class UnknownVertexError(GraphDivisorsError):
    pass


class MissingVertexValueError(GraphDivisorsError):
    pass


class GraphMismatchError(GraphDivisorsError):
    pass


class EnumerationCapExceededError(GraphDivisorsError):
    """An enumeration would exceed the configured cap; nothing was computed."""

    def __init__(self, message: str, required: int, cap: int):
        super().__init__(message)
        self.required = required
        self.cap = cap


class SizeCapExceededError(GraphDivisorsError):
    pass


class InvalidMorphismError(GraphDivisorsError):
    pass


class RankPreconditionError(GraphDivisorsError):
    """Raised when an operation requires a divisor of rank 2."""

    def __init__(self, message: str, rank: int):
        super().__init__(message)
        self.rank = rank


class NotTwoEdgeConnectedError(GraphDivisorsError):
    pass
