"""Exception types shared across the package."""


class MonadExtError(Exception):
    pass


class ShapeError(MonadExtError, ValueError):
    """Carriers or arities do not line up."""


class CompositionError(ShapeError):
    pass


class ValidationError(MonadExtError, ValueError):
    """A payload is not a valid canonical element of its monad."""


class ParseError(MonadExtError, ValueError):
    pass


class CapabilityError(MonadExtError):
    """The requested operation needs an enumerable carrier."""


class ResourceGuardError(MonadExtError):
    pass


class PreconditionError(MonadExtError):
    pass


class InvariantError(MonadExtError, AssertionError):
    """An internal invariant that the mathematics guarantees was violated."""
