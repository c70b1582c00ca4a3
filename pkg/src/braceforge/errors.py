"""Exception taxonomy shared by all braceforge modules."""


class BraceforgeError(Exception):
    """Base class for all braceforge errors."""


class ShapeError(BraceforgeError, ValueError):
    """Dimension or group mismatch between operands."""


class ValidityError(BraceforgeError, ValueError):
    """A value violates its structural invariants (e.g. a non-bijective matrix)."""


class ContractError(BraceforgeError, ValueError):
    """A precondition of an operation was violated."""


class DomainError(BraceforgeError, ValueError):
    """Input outside the mathematical domain an algorithm supports."""


class CapacityError(BraceforgeError):
    """A computation would exceed a configured size bound."""


class IntegrityError(BraceforgeError):
    """A persisted file is malformed, truncated or inconsistent."""
