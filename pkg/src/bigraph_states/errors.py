"""Exception types raised across the package."""


class GraphError(ValueError):
    """Base class for invalid graph input."""


class MalformedHeader(GraphError):
    pass


class EdgeEndpointOutOfRange(GraphError):
    pass


class EdgeNotBipartite(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class VertexOutOfRange(GraphError, IndexError):
    pass


class QubitLimitExceeded(GraphError):
    pass


class SameQubit(ValueError):
    pass


class SizeMismatch(ValueError):
    pass


class WrongSide(ValueError):
    pass


class EmptySupport(ValueError):
    pass


class NonUniformParameters(ValueError):
    pass


class NonInvertibleParameters(ValueError):
    """A parity-inversion base is outside (0, 1); counts cannot be resolved."""


class NonPositiveCorrelator(ValueError):
    """A correlator fed to the log inversion is <= 0."""


class InvalidSweepAxis(ValueError):
    pass
