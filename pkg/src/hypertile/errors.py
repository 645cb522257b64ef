"""Exception types raised across the package."""


class HypertileError(Exception):
    """Base class for all package errors."""


class InputError(HypertileError, ValueError):
    pass


class OutOfRange(InputError):
    pass


class DegenerateTriple(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class FormatError(InputError):
    pass


class UnlabelledVertex(InputError):
    pass


class TooSmall(InputError):
    pass


class TooLarge(InputError):
    pass


class BadModulus(InputError):
    pass


class BadL(InputError):
    pass


class IncompleteOrientation(InputError):
    pass


class NotAPartition(InputError):
    pass


class Overlap(InputError):
    pass


class BadSize(InputError):
    pass


class InvalidTiling(InputError):
    pass


class BudgetExhausted(HypertileError):
    """Search was cut off by its node budget; the answer is unknown."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class SamplingBudgetZero(InputError):
    pass


class DegreeTooLow(HypertileError):
    pass


class SampleCountZero(HypertileError):
    pass


class NoAbsorberLeft(HypertileError):
    """A leftover 4-set found no unused absorbing member."""

    def __init__(self, message: str, four_set=None, diagnostics=None):
        super().__init__(message)
        self.four_set = four_set
        self.diagnostics = diagnostics or {}


class HypothesisWarning(UserWarning):
    """The codegree hypothesis of a routine does not hold; results carry no guarantee."""


class CounterexampleWarning(UserWarning):
    """The local-search tiler got stuck inside its guarantee region."""
