"""Exception hierarchy shared by every module of the toolkit."""


class GPTError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(GPTError, ValueError):
    """A vector does not have the length its model requires."""


class WeightError(GPTError, ValueError):
    """Mixture weights are negative or do not sum to one."""


class NotAState(GPTError, ValueError):
    """A vector lies outside the state space of its model."""


class NotInFace(GPTError, ValueError):
    """A state does not belong to the face it was tested against."""


class UnsupportedComposite(GPTError):
    """The requested composition rule cannot be applied to these factors."""


class NumericalError(GPTError, ArithmeticError):
    """An LP or eigen-solver returned a degenerate or unusable result."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class Inconclusive(GPTError):
    """A search stopped before it could certify its answer.

    ``best`` holds the best lower bound found so far (if any).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class AnchorNotPure(GPTError, ValueError):
    """The anchor state of a subsystem embedding is not pure."""


class RequiresPure(GPTError, ValueError):
    """An operation defined for pure states received a mixed one."""
