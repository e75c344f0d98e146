"""Exception types shared across the package."""


class QpermError(Exception):
    """Base class for all library-specific errors."""


class InvalidOrderError(QpermError, ValueError):
    """Root-of-unity order is zero or negative."""


class NotVanishingSumError(QpermError, ValueError):
    """Input multiset does not sum to zero, so cycle search is undefined."""


class ShapeError(QpermError, ValueError):
    """Matrix dimensions do not match the operation's contract."""


class SearchBudgetExceeded(QpermError, RuntimeError):
    """A backtracking search ran out of its node budget before deciding.

    Distinct from a definite "no" answer: callers may retry with a larger
    budget.
    """

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class ResourceCapExceeded(QpermError, RuntimeError):
    """A computation would exceed a configured memory or size cap."""

    def __init__(self, message, cap_name=None, cap_value=None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value


class UnstableRankError(QpermError, RuntimeError):
    """Sketched rank estimates disagreed between seeds."""


class ClassificationError(QpermError, RuntimeError):
    """A regular 6x6 Hadamard matrix matched no known family.

    Either the input is not what it claims to be or there is a bug; this is
    never silently swallowed.
    """


class NotMixedRegularError(QpermError, ValueError):
    """A row pair has a scalar product that is neither binary nor ternary."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class ConsistencyError(QpermError, RuntimeError):
    """An existence witness and an emptiness obstruction both triggered."""


class MatrixParseError(QpermError, ValueError):
    """A matrix file failed to parse; carries the offending position."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column
