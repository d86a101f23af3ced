"""Single-parameter critical sensing of mu with t, delta, alpha known exactly."""
import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import DomainError, SingularModeError
from .parallel import ordered_map
from .search import scan_then_refine
from .table import SweepTable

DEFAULT_WINDOW = (0.8, 1.2)
N_SCAN = 201
PEAK_TOL = 1e-6


@dataclass(frozen=True)
class PeakResult:
    mu_star: float
    f_max: float
    bracket: tuple
    refined: bool


def qfi_sweep(base, mu_grid, cache=None):
    """F_mumu at each mu of a strictly increasing grid; table columns (mu, f_mumu)."""
    mu = np.asarray(mu_grid, dtype=float)
    if mu.ndim != 1 or len(mu) == 0:
        raise DomainError("mu grid must be a non-empty 1-D sequence")
    if np.any(np.diff(mu) <= 0):
        raise DomainError("mu grid must be strictly increasing")
    try:
        values = model.qfi_mu_batch(base, mu=mu, cache=cache)
    except SingularModeError as exc:
        # locate the offending point for the message
        for m in mu:
            try:
                model.qfi_mu(base.replace(mu=float(m)), cache)
            except SingularModeError as inner:
                raise inner.at(mu=float(m)) from exc
        raise
    return SweepTable(("mu", "f_mumu"), list(zip(mu.tolist(), values.tolist())))


def max_qfi(base, window=None, n_scan=N_SCAN, tol=PEAK_TOL, cache=None):
    """Peak of F_mumu over mu in ``window`` (units of t; default 0.8..1.2)."""
    lo, hi = DEFAULT_WINDOW if window is None else window
    scale = abs(base.t)
    lo, hi = lo * scale, hi * scale

    def f(mu):
        return model.qfi_mu(base.replace(mu=mu), cache)

    def f_grid(mus):
        return model.qfi_mu_batch(base, mu=mus, cache=cache)

    peak = scan_then_refine(f, lo, hi, n_scan, tol * scale, f_grid=f_grid)
    return PeakResult(peak.x, peak.value, peak.bracket, peak.refined)


def short_range_max_qfi(L, base, window=None, cache=None):
    """max_qfi with the pairing replaced by its alpha -> infinity limit."""
    return max_qfi(base.replace(L=L, alpha=math.inf), window, cache=cache)


def _scaling_point(args):
    base, L, window = args
    peak = max_qfi(base.replace(L=L), window)
    return (L, peak.f_max, peak.mu_star)


def scaling_curve(alpha, L_list, base, window=None, workers=1):
    """Rows (L, f_max, mu_star) of the peak QFI for each system size."""
    Ls = [int(L) for L in L_list]
    if any(L % 2 for L in Ls):
        raise DomainError("all L must be even")
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise DomainError("L list must be strictly increasing")
    base = base.replace(alpha=alpha)
    rows = ordered_map(_scaling_point, [(base, L, window) for L in Ls], workers)
    return SweepTable(("L", "f_max", "mu_star"), rows)


def ratio_Rm(alpha, L, base, window=None, cache=None):
    """Peak QFI at finite alpha over the short-range peak, each maximised separately."""
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    num = max_qfi(base.replace(L=L, alpha=alpha), window, cache=cache)
    den = short_range_max_qfi(L, base, window, cache=cache)
    return num.f_max / den.f_max


def _ratio_point(args):
    alpha, L, base, window = args
    return (alpha, ratio_Rm(alpha, L, base, window))


def ratio_curve(alpha_grid, L, base, window=None, workers=1):
    """Rows (alpha, R) for a strictly increasing alpha grid."""
    alphas = [float(a) for a in alpha_grid]
    rows = ordered_map(_ratio_point, [(a, L, base, window) for a in alphas], workers)
    return SweepTable(("alpha", "R"), rows)


def cramer_rao_bound(f, n_measurements=1):
    """Smallest achievable standard deviation, 1 / sqrt(N F)."""
    if not f > 0:
        raise DomainError(f"QFI must be > 0, got {f}")
    if isinstance(n_measurements, bool) or int(n_measurements) != n_measurements \
            or n_measurements < 1:
        raise DomainError(f"n_measurements must be a positive integer, got {n_measurements!r}")
    return 1.0 / math.sqrt(n_measurements * f)
