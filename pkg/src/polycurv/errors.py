"""Exception hierarchy shared by all modules."""


class PolyCurvError(ValueError):
    """Base class; ``operation`` names the failing call for CLI diagnostics."""

    operation = "polycurv"

    def __init__(self, message, *, witness=None, operation=None):
        super().__init__(message)
        self.witness = witness
        if operation is not None:
            self.operation = operation


class SkeletonError(PolyCurvError):
    operation = "skeleton"


class HypothesisError(PolyCurvError):
    """A theorem's precondition fails; ``witness`` holds the offending vertex or edge."""

    operation = "hypothesis"


class PlanarCodeError(PolyCurvError):
    operation = "parse_planar_code"
