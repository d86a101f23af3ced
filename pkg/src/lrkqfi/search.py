"""Grid bracketing plus golden-section refinement for 1-D maxima."""
import math
from typing import NamedTuple

import numpy as np

from .errors import BoundaryPeakError, DomainError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Peak(NamedTuple):
    x: float
    value: float
    bracket: tuple
    refined: bool


def golden_section_max(f, lo, hi, tol):
    """Maximise a unimodal ``f`` on [lo, hi] until hi - lo < tol.

    Returns (x, f(x)) for the best point evaluated.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo >= tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def scan_then_refine(f, lo, hi, n_grid, tol, f_grid=None):
    """Coarse scan of ``n_grid`` points on [lo, hi], then golden refinement.

    ``f_grid`` optionally evaluates the whole scan at once.  A maximum on
    the window edge raises BoundaryPeakError.  The refined value is never
    below the coarse maximum.
    """
    if not hi > lo:
        raise DomainError(f"empty window ({lo}, {hi})")
    if n_grid < 3:
        raise DomainError("need at least 3 scan points")
    grid = np.linspace(lo, hi, n_grid)
    values = np.asarray(f_grid(grid) if f_grid is not None else [f(x) for x in grid])
    i = int(np.argmax(values))
    if i == 0 or i == n_grid - 1:
        raise BoundaryPeakError(float(grid[i]), (lo, hi))
    b_lo, b_hi = float(grid[i - 1]), float(grid[i + 1])
    x, fx = golden_section_max(f, b_lo, b_hi, tol)
    if fx < values[i]:
        return Peak(float(grid[i]), float(values[i]), (b_lo, b_hi), False)
    return Peak(float(x), float(fx), (b_lo, b_hi), True)
