"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A construction would exceed the configured vertex budget."""


class PowerIterationError(RuntimeError):
    """The eigensolver hit its iteration limit before converging.

    Carries the best estimate produced so far in ``best`` (a SpectralResult
    for the rooted-tree solvers, a plain float for the shifted solver).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ClassificationAmbiguityError(RuntimeError):
    """Type I / type II detection did not resolve to exactly one case.

    The dichotomy is clean in exact arithmetic, so hitting this means the
    tie tolerance is mismatched to the numerical noise of the instance.
    """
