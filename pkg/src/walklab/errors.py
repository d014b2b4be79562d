"""Exception hierarchy shared by every walklab module."""


class WalkLabError(Exception):
    """Base class for all library errors."""


class GraphFormatError(WalkLabError):
    """Raised for unreadable edge-list input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SelfLoop(GraphFormatError):
    pass


class DuplicateEdge(GraphFormatError):
    pass


class Malformed(GraphFormatError):
    pass


class InvalidGraph(WalkLabError):
    """The graph violates simplicity/symmetry or has an isolated node."""


class InvalidSize(WalkLabError):
    pass


class UnknownState(WalkLabError):
    pass


class Disconnected(WalkLabError):
    pass


class DeadEnd(WalkLabError):
    """No admissible move exists from a state (alpha = 0 at a degree-one node)."""

    def __init__(self, message, state=None, trajectory=None):
        self.state = state
        self.trajectory = trajectory
        super().__init__(message)


class Overflow(WalkLabError):
    pass


class NotIrreducible(WalkLabError):
    pass


class NotErgodic(WalkLabError):
    pass


class NoConvergence(WalkLabError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")


class PreconditionFailed(WalkLabError):
    pass


class BudgetExceeded(WalkLabError):
    pass


class ZeroBacktrack(WalkLabError):
    pass


class NegativeEntry(WalkLabError):
    pass


class SolveFailure(WalkLabError):
    pass


class NoCycleInBall(WalkLabError):
    pass


class HypothesisViolated(WalkLabError):
    pass


class NeverReturned(WalkLabError):
    pass
