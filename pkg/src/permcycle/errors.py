"""Exception hierarchy shared by the library and the CLI."""


class PermCycleError(Exception):
    """Base class for all errors raised by permcycle."""


class InvalidInputError(PermCycleError, ValueError):
    """An argument is malformed or outside its documented range."""


class PreconditionError(PermCycleError, ValueError):
    """A well-formed argument violates an operation's precondition."""


class CapacityError(PermCycleError):
    """A construction or enumeration would exceed its size budget."""


class InvalidSequenceError(PermCycleError, ValueError):
    """A sequence violates a structural property it is required to have."""


class InternalConsistencyError(PermCycleError, RuntimeError):
    """A guaranteed invariant failed to hold; this signals a bug."""
