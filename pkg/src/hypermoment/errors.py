"""Exception types shared across the package."""


class HypermomentError(Exception):
    """Base class for all library errors."""


class DomainError(HypermomentError):
    """Input outside an operation's domain: bad point, mixed carriers, bad index."""


class SpecError(HypermomentError):
    """Malformed specification file or JSON literal."""


class PreconditionError(HypermomentError):
    """A documented precondition of an operation was violated."""


class DecompositionError(HypermomentError):
    """Joint eigendecomposition of the translation matrices failed."""
