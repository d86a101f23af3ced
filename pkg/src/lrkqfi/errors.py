"""Exception hierarchy shared by all modules."""


class LRKError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LRKError, ValueError):
    """An argument lies outside the supported domain."""


class SingularModeError(LRKError, ArithmeticError):
    """A momentum mode is gapless, so its Bogoliubov angle is undefined."""

    def __init__(self, k, mu=None, t=None):
        self.k = k
        self.mu = mu
        self.t = t
        where = f"k={k!r}"
        if mu is not None:
            where += f", mu={mu!r}"
        if t is not None:
            where += f", t={t!r}"
        super().__init__(f"gapless mode ({where})")

    def at(self, mu=None, t=None):
        return SingularModeError(self.k, mu=self.mu if mu is None else mu,
                                 t=self.t if t is None else t)


class QuadratureError(LRKError, ArithmeticError):
    def __init__(self, estimate, error, n_intervals):
        self.estimate = estimate
        self.error = error
        self.n_intervals = n_intervals
        super().__init__(
            f"quadrature did not converge after {n_intervals} intervals: "
            f"estimate={estimate!r}, error bound={error!r}")


class BoundaryPeakError(LRKError, ArithmeticError):
    """The maximum of a scanned function sits on the edge of its window."""

    def __init__(self, location, window):
        self.location = location
        self.window = tuple(window)
        super().__init__(
            f"peak at {location!r} lies on the boundary of window {self.window}; "
            "widen the window")


class ThresholdRangeError(LRKError, ArithmeticError):
    """The deviation criterion is never met inside the sigma range."""


class DegenerateThresholdError(LRKError, ArithmeticError):
    """The deviation criterion is already met at the lower sigma edge."""


class NonMonotoneError(LRKError, ArithmeticError):
    """The deviation measure is not monotone on the pre-check grid."""


NUMERIC_ERRORS = (SingularModeError, QuadratureError, BoundaryPeakError,
                  ThresholdRangeError, DegenerateThresholdError, NonMonotoneError)
