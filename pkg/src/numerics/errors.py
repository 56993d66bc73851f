"""
Exception hierarchy shared by every solver module.

Every error raised on purpose by the library derives from GausswellError so
the command-line layer can record a failed point and keep going. The
concrete classes also derive from the matching builtin (ValueError for bad
input, RuntimeError for numerical failures) so callers that only know the
builtins still catch them.
"""

from typing import Any, List, Optional, Sequence, Tuple


class GausswellError(Exception):
    """Base class for all library errors."""


class InvalidInputError(GausswellError, ValueError):
    """Raised when arguments violate an operation's preconditions."""


class PrecisionError(GausswellError, ValueError):
    """Raised when the working precision is too low for the requested computation."""


class CapacityError(GausswellError, ValueError):
    """Raised when a request exceeds a configured size cap (e.g. symbolic-in-lambda D)."""


class ConvergenceError(GausswellError, RuntimeError):
    """
    Raised when an iterative method does not reach its tolerance.

    Attributes:
        last_iterate: Last value produced before giving up.
        iterations: Number of iterations performed.
        trace: Iterates visited, oldest first.
        ladder: (D, value) pairs for basis/Hankel-size ladders.
    """

    def __init__(self, message: str, last_iterate: Any = None, iterations: int = 0,
                 trace: Optional[Sequence[Any]] = None,
                 ladder: Optional[Sequence[Tuple[int, Any]]] = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations
        self.trace: List[Any] = list(trace or [])
        self.ladder: List[Tuple[int, Any]] = list(ladder or [])


class SingularDerivativeError(ConvergenceError):
    """Derivative vanished (relative to its scale) during a 1-D Newton iteration."""


class SingularJacobianError(ConvergenceError):
    """Jacobian became singular during a 2-D Newton iteration."""


class BranchLossError(ConvergenceError):
    """A root escaped the branch or basin it was seeded on."""


class MonotonicityError(GausswellError, AssertionError):
    """A variational bound that must hold by construction was violated."""
