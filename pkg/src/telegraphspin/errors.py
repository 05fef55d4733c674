"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical or numerical parameter is out of its allowed domain."""


class TimeRangeError(ValueError):
    """A requested time lies outside the interval covered by a realization."""


class AccuracyError(RuntimeError):
    """A numerical routine could not meet its stated accuracy target."""


class BranchError(ValueError):
    """Parameters belong to the other analytic branch of the correlator."""
