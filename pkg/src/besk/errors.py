"""Exception hierarchy shared across the package."""


class BeskError(Exception):
    """Base class for every error raised by this package."""


class ParseError(BeskError, ValueError):
    pass


class MalformedHeader(ParseError):
    pass


class VertexOutOfRange(ParseError):
    pass


class WrongArity(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass


class TooLarge(BeskError):
    pass


class BudgetExceeded(BeskError):
    """A search hit its node budget; the answer is unknown, not negative."""

    def __init__(self, message="node budget exceeded", nodes=0):
        super().__init__(message)
        self.nodes = nodes


class NotFree(BeskError):
    """The input graph contains a forbidden configuration."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotM1Input(BeskError):
    pass


class NotConnected(BeskError):
    pass


class UnknownPart(BeskError):
    pass


class DiamondNotInF(BeskError):
    pass


class OddK(BeskError):
    pass


class KTooSmall(BeskError):
    pass


class CertMismatch(BeskError):
    pass


class StructureViolation(BeskError):
    """A structural law failed on an input that was certified free."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
