"""Shared exception types."""


class GkError(Exception):
    """Base class for all library errors."""


class RingMismatchError(GkError):
    """Operands live in different polynomial rings."""


class ParseError(GkError):
    """Malformed polynomial string."""


class PreconditionError(GkError):
    """A documented precondition of an operation is violated."""


class UngradedError(GkError):
    """Graded data was requested from an inhomogeneous object."""


class CertificateError(GkError):
    """An internal well-definedness or composition certificate failed."""


class InstanceError(GkError):
    """Rejected instance data (e.g. the composition condition fails)."""
