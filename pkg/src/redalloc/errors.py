"""Exception hierarchy. CLI exit codes hang off these classes."""


class RedAllocError(Exception):
    """Base class for solver errors."""


class InvalidInstance(RedAllocError, ValueError):
    """Instance data violates a structural or range requirement."""


class ShapeError(RedAllocError, ValueError):
    """Configuration does not match the instance layout."""


class Infeasible(RedAllocError):
    """No configuration reaches the reliability floor."""


class EmptySubsystemBound(Infeasible):
    """Some subsystem cannot hold a single unit (all upper bounds zero)."""


class BudgetTooSmall(RedAllocError):
    """The linear budget cut excludes every configuration."""


class EnumerationTooLarge(RedAllocError):
    """Brute-force enumeration would exceed its point budget."""


class NotNormalized(RedAllocError, ValueError):
    """Costs inside a subsystem are not in descending order."""
