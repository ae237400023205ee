"""Shared exception types."""


class ParameterError(ValueError):
    """A precondition on user-supplied parameters was violated."""


class CapacityError(ValueError):
    """An input exceeds the size ceiling of a dense routine."""


class StructureError(ValueError):
    """An operation was applied to a state of the wrong structure
    (e.g. a coin operation on a coin-less state)."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


class DegeneratePlaneError(ValueError):
    """The two generators are (near-)parallel; the plane is undefined."""


class DomainError(ValueError):
    """A numerical routine left its validity domain (e.g. matrix-log branch)."""
