"""Least-squares line fits on raw, log-log and log-linear coordinates."""
import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .errors import DomainError


class Transform(str, Enum):
    LINEAR = "linear"
    LOGLOG = "loglog"
    LOGLINEAR = "loglinear"


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    n_points: int
    transform: Transform = Transform.LINEAR

    @property
    def exponent(self):
        return self.slope

    @property
    def prefactor(self):
        """exp(intercept) for the log transforms, the raw intercept otherwise."""
        if self.transform is Transform.LINEAR:
            return self.intercept
        return math.exp(self.intercept)

    @property
    def decay_rate(self):
        return -self.slope

    def to_dict(self):
        d = asdict(self)
        d["transform"] = self.transform.value
        return d


def linear_fit(xs, ys, transform=Transform.LINEAR):
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("xs and ys must be 1-D with equal length")
    if len(x) < 2:
        raise DomainError("need at least two points")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DomainError("non-finite data")
    # canonical order makes the result independent of input ordering
    order = np.lexsort((y, x))
    x, y = x[order], y[order]
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise DomainError("xs are all equal")
    dy = y - y.mean()
    slope = float(dx @ dy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float(dy @ dy)
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return FitResult(slope, intercept, r2, len(x), Transform(transform))


def power_law_fit(xs, ys):
    """y = A x^p fitted as a line in (ln x, ln y); slope is p."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fit needs strictly positive data")
    return linear_fit(np.log(x), np.log(y), Transform.LOGLOG)


def exp_decay_fit(xs, ys):
    """y = A exp(-q x) fitted as a line in (x, ln y); decay_rate is q."""
    y = np.asarray(ys, dtype=float)
    if np.any(y <= 0):
        raise DomainError("exponential fit needs strictly positive ys")
    return linear_fit(xs, np.log(y), Transform.LOGLINEAR)
