"""Exception hierarchy shared by all modules."""


class BoxColorError(Exception):
    """Base class for every error raised by this package."""


class OverlappingBoxes(BoxColorError):
    pass


class EmptyRegion(BoxColorError):
    pass


class DomainError(BoxColorError):
    """A coordinate falls outside the breakpoints of an axis map."""


class InvalidArrangement(BoxColorError):
    def __init__(self, report):
        super().__init__(f"invalid arrangement: {report.summary()}")
        self.report = report


class MissingVertex(BoxColorError):
    pass


class Timeout(BoxColorError):
    """A search hit its node budget before reaching a verdict."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class SizeLimit(BoxColorError):
    pass


class SolverCrash(BoxColorError):
    pass


class ParseError(BoxColorError):
    pass


class RealizationError(BoxColorError):
    pass


class Infeasible(BoxColorError):
    pass


class PreconditionViolated(BoxColorError):
    pass


class InternalError(BoxColorError):
    pass


class StructureError(BoxColorError):
    def __init__(self, premise, message):
        super().__init__(f"premise ({premise}) failed: {message}")
        self.premise = premise


class CertificationError(BoxColorError):
    def __init__(self, stage, message):
        super().__init__(f"stage {stage!r} failed: {message}")
        self.stage = stage
