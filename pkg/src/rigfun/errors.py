"""Exception types shared across the package."""


class RigfunError(Exception):
    """Base class for all library errors."""


class DomainViolation(RigfunError):
    """An argument lies outside the domain an operation is defined on."""


class DivisionByZeroPossible(RigfunError):
    """A ball reciprocal was requested for a ball containing zero."""


class BadWitness(RigfunError):
    """A trusted lower-bound witness was contradicted by computed enclosures."""


class NotBoundedBelow(RigfunError):
    """A denominator could not be certified to stay above a positive bound."""


class RangeViolation(RigfunError):
    """The inner function of a composition could not be certified to map into [-1,1]."""


class ConstantPolynomial(RigfunError):
    """Root isolation was asked to solve a constant equation."""


class EndpointRoot(RigfunError):
    """A Sturm count query hit a root at an interval endpoint."""


class Unsupported(RigfunError):
    """An expression node has no algorithm under the chosen representation."""

    def __init__(self, node_kind: str, strategy: str):
        super().__init__(f"node {node_kind!r} is not supported by strategy {strategy!r}")
        self.node_kind = node_kind
        self.strategy = strategy


class Timeout(RigfunError):
    """A configurable work budget (nodes, degree, or wall time) was exhausted."""


class ParseError(RigfunError):
    """Expression text could not be parsed; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position
