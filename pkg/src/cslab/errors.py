"""Exception types raised across the package."""


class CslabError(Exception):
    """Base class for all errors raised by cslab."""


class MatrixParseError(CslabError, ValueError):
    pass


class IntegerOverflow(CslabError, OverflowError):
    """An entry exceeded the configured integer policy (see CSLAB_MAX_INT)."""


class BadIntegerPolicy(CslabError, ValueError):
    """CSLAB_MAX_INT is not a usable bit width."""


class NotUnimodular(CslabError, ValueError):
    pass


class NotCompletable(CslabError, ValueError):
    pass


class NotCappellShaneson(CslabError, ValueError):
    pass


class NotStandardForm(CslabError, ValueError):
    pass


class SearchExhausted(CslabError):
    def __init__(self, bound: int):
        super().__init__(f"no admissible vector found with max-norm <= {bound}")
        self.bound = bound


class InvalidMoveShape(CslabError, ValueError):
    pass


class NotUnimodularConjugator(NotUnimodular):
    pass


class TraceUnreachable(CslabError, ValueError):
    pass


class PreconditionE0(CslabError, ValueError):
    pass


class BadResidue(CslabError, ValueError):
    pass


class DegenerateProjection(CslabError, ValueError):
    pass


class SegmentLeavesGLPlus(CslabError, ValueError):
    pass


class LoopNotClosed(CslabError, ValueError):
    pass
