"""Exception hierarchy shared by every arbortile module."""


class ArbortileError(Exception):
    """Base class for all library errors."""


class EmptyGraphError(ArbortileError):
    pass


class CapExceeded(ArbortileError):
    """A desk-scale search budget or size cap was hit.

    This never means "no"; it means the question was not answered.
    """


class ParseError(ArbortileError):
    def __init__(self, message, line=None, byte=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if byte is not None:
            where.append(f"byte {byte}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.line = line
        self.byte = byte


class NotAForest(ArbortileError):
    pass


class DivisibilityError(ArbortileError):
    pass


class ArityError(ArbortileError):
    pass


class NotInHtilde(ArbortileError):
    pass


class ConstructionBug(ArbortileError):
    """Internal consistency failure; indicates a bug, never a property of the input."""


class EmbedFail(ArbortileError):
    def __init__(self, message, exhausted_budget=False, depth=None):
        super().__init__(message)
        self.exhausted_budget = exhausted_budget
        self.depth = depth


class ChainFail(ArbortileError):
    pass


class ClusterSizeError(ArbortileError):
    pass


class UnknownCase(ArbortileError):
    pass


class NotDoubleEdge(ArbortileError):
    pass


class GenFail(ArbortileError):
    def __init__(self, message, best_girth=None, best_alpha=None):
        super().__init__(message)
        self.best_girth = best_girth
        self.best_alpha = best_alpha


class NotApplicable(ArbortileError):
    pass


class BadN(ArbortileError):
    pass


class PremiseViolated(ArbortileError):
    def __init__(self, check, detail=""):
        super().__init__(f"{check}: {detail}" if detail else check)
        self.check = check
