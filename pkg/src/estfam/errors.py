"""Exception hierarchy shared by every estfam module."""


class EstfamError(ValueError):
    """Base class; the CLI maps it to the data-error exit code."""


class DegenerateInput(EstfamError):
    """A population constant is undefined (zero mean, zero variance, ...)."""

    def __init__(self, constant: str, reason: str):
        self.constant = constant
        super().__init__(f"{constant} is undefined: {reason}")


class InvalidDesign(EstfamError):
    """Sample size outside 1 <= n < N."""


class EmptySample(EstfamError):
    pass


class SingularLambda(EstfamError):
    """a*mean_x + b is zero or numerically indistinguishable from zero."""


class InvalidBase(EstfamError):
    """The bracket base leaves the family's real-valued domain."""


class NoInteriorOptimum(EstfamError):
    """MSE does not depend on alpha (lambda*g == 0)."""


class ZeroMse(EstfamError):
    pass


class AllSamplesFailed(EstfamError):
    pass


class TooLarge(EstfamError):
    pass


class DomainFailure(EstfamError):
    """An estimator could not be evaluated on one subset during enumeration."""

    def __init__(self, estimator: str, subset: tuple[int, ...], reason: str):
        self.estimator = estimator
        self.subset = subset
        super().__init__(f"estimator {estimator} failed on subset {subset}: {reason}")


class MismatchedLists(EstfamError):
    pass


class ParseError(EstfamError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class TooFewRows(EstfamError):
    pass
