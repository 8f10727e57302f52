"""Exception hierarchy shared by the library and the CLI exit-code map."""


class Pl4Error(Exception):
    """Base class for all errors raised by this package."""


class ParseError(Pl4Error):
    pass


class ValidationError(Pl4Error):
    """Combinatorial input is not a closed oriented 4-pseudomanifold."""


class MoveRejected(ValidationError):
    """A Pachner move's preconditions are not met."""


class DegeneracyError(Pl4Error):
    """A simplex (or triangle, edge) is too small for the tolerance."""


class NonRealizableError(DegeneracyError):
    """Squared lengths violate a Euclidean (Cayley-Menger) inequality."""


class NotAcyclicError(Pl4Error):
    """The chain complex failed the numerical exactness check."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class PartitionError(NotAcyclicError):
    """No admissible minor partition could be built."""
