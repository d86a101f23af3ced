"""Estimating mu when the hopping t is only known up to a Gaussian spread.

The figure of merit is the Gaussian-weighted average of the pure-state QFI,

    Fbar(mu; tbar, sigma) = int dt p(t) F_mumu(mu, t),

evaluated at fixed mu (default 1) while tbar and sigma are varied.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import model
from .errors import (DegenerateThresholdError, DomainError, NonMonotoneError,
                     ThresholdRangeError)
from .fitting import power_law_fit
from .metrology import max_qfi
from .parallel import ordered_map
from .quadrature import gauss_hermite_expectation, gauss_kronrod
from .search import scan_then_refine
from .table import SweepTable

DEFAULT_WINDOW = (0.8, 1.2)
SIGMA_RANGE = (1e-7, 1e-1)


class QuadMethod(str, Enum):
    ADAPTIVE_GK = "adaptive-gk"
    GAUSS_HERMITE = "gauss-hermite"


@dataclass(frozen=True)
class QuadratureConfig:
    method: QuadMethod = QuadMethod.ADAPTIVE_GK
    rel_tol: float = 1e-6
    span_sigmas: float = 8.0
    forced_knots: tuple = ()
    gh_nodes: int = 257
    max_intervals: int = 4000

    def __post_init__(self):
        object.__setattr__(self, "method", QuadMethod(self.method))
        object.__setattr__(self, "forced_knots", tuple(float(x) for x in self.forced_knots))
        if not 1e-12 < self.rel_tol < 1e-2:
            raise DomainError(f"rel_tol must lie in (1e-12, 1e-2), got {self.rel_tol}")
        if not 4 <= self.span_sigmas <= 12:
            raise DomainError(f"span_sigmas must lie in [4, 12], got {self.span_sigmas}")


@dataclass(frozen=True)
class UncertainSpec:
    t_bar: float
    sigma_t: float
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if not self.sigma_t >= 0:
            raise DomainError(f"sigma_t must be >= 0, got {self.sigma_t}")


@dataclass(frozen=True)
class ThresholdResult:
    sigma_t_d: float
    L: int
    alpha: float
    delta_d: float
    bracket: tuple = ()


class AveragedPeak(NamedTuple):
    t_bar_star: float
    f_bar_max: float
    bracket: tuple = ()
    refined: bool = True


def gaussian_pdf(t, mean, sigma):
    z = (t - mean) / sigma
    return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))


def averaged_qfi(mu, spec, base, cache=None):
    """Gaussian average over t of F_mumu at the given mu."""
    tb, sigma, quad = float(spec.t_bar), float(spec.sigma_t), spec.quad
    if sigma == 0.0 or sigma < 1e-12 * abs(tb):
        return model.qfi_mu(base.replace(mu=mu, t=tb), cache)

    def qfi_of_t(t):
        return model.qfi_mu_batch(base, mu=mu, t=t, cache=cache)

    if quad.method is QuadMethod.GAUSS_HERMITE:
        return gauss_hermite_expectation(qfi_of_t, tb, sigma, quad.gh_nodes)

    def integrand(t):
        return gaussian_pdf(t, tb, sigma) * qfi_of_t(t)

    half = quad.span_sigmas * sigma
    # F_mumu(t) peaks where mu + t cos k ~ 0 for k near pi, i.e. t ~ +-mu
    knots = (mu, -mu) + quad.forced_knots
    res = gauss_kronrod(integrand, tb - half, tb + half, points=knots,
                        rel_tol=quad.rel_tol, max_intervals=quad.max_intervals)
    return res.value


def uncertain_surface(mu, t_bar_grid, sigma_grid, base, quad=None, workers=1):
    """Rows (t_bar, sigma_t, mu^2 Fbar) in lexicographic (t_bar, sigma_t) order."""
    tbs = _increasing(t_bar_grid, "t_bar grid")
    sigmas = _increasing(sigma_grid, "sigma grid")
    quad = QuadratureConfig() if quad is None else quad
    jobs = [(float(mu), tb, s, base, quad) for tb in tbs for s in sigmas]
    values = ordered_map(_surface_point, jobs, workers)
    rows = [(tb, s, v) for (_, tb, s, _, _), v in zip(jobs, values)]
    return SweepTable(("t_bar", "sigma_t", "f_bar"), rows, inputs=("t_bar", "sigma_t"))


def _surface_point(args):
    mu, tb, s, base, quad = args
    return mu * mu * averaged_qfi(mu, UncertainSpec(tb, s, quad), base)


def max_averaged_qfi(sigma_t, base, t_bar_window=None, mu=1.0, quad=None,
                     n_scan=101, tol=1e-6, cache=None):
    """Maximum of Fbar over t_bar at fixed mu; window in units of mu."""
    lo, hi = DEFAULT_WINDOW if t_bar_window is None else t_bar_window
    scale = abs(mu)
    quad = QuadratureConfig() if quad is None else quad

    def f(tb):
        return averaged_qfi(mu, UncertainSpec(tb, sigma_t, quad), base, cache)

    peak = scan_then_refine(f, lo * scale, hi * scale, n_scan, tol * scale)
    return AveragedPeak(peak.x, peak.value, peak.bracket, peak.refined)


def _deviation(sigma, base, reference, mu, quad, window):
    peak = max_averaged_qfi(sigma * mu, base, window, mu=mu, quad=quad)
    return abs(1.0 - peak.f_bar_max / reference)


def deviation_threshold(L, alpha, base, delta_d=0.1, sigma_range=SIGMA_RANGE,
                        rel_width=0.02, n_check=13, mu=1.0, quad=None, window=None):
    """Smallest sigma_t/mu where |1 - max Fbar / F^m| exceeds delta_d.

    F^m is the exact-knowledge peak QFI for the same (L, alpha).  A log grid
    of ``n_check`` sigmas first verifies the deviation grows monotonically and
    brackets the crossing; geometric bisection then narrows the bracket to
    hi/lo <= 1 + rel_width.
    """
    if not 0 < delta_d < 1:
        raise DomainError(f"delta_d must lie in (0, 1), got {delta_d}")
    quad = QuadratureConfig() if quad is None else quad
    base = base.replace(L=L, alpha=alpha)
    reference = max_qfi(base).f_max
    grid = np.geomspace(sigma_range[0], sigma_range[1], n_check)
    devs = [_deviation(s, base, reference, mu, quad, window) for s in grid]
    slack = 10 * quad.rel_tol
    for i in range(1, len(devs)):
        if devs[i] < devs[i - 1] - slack:
            raise NonMonotoneError(
                f"deviation drops from {devs[i - 1]:.6g} to {devs[i]:.6g} between "
                f"sigma={grid[i - 1]:.3g} and {grid[i]:.3g} (L={L}, alpha={alpha})")
    if devs[0] > delta_d:
        raise DegenerateThresholdError(
            f"deviation {devs[0]:.4g} > {delta_d} already at sigma={grid[0]:.3g}")
    if devs[-1] <= delta_d:
        raise ThresholdRangeError(
            f"deviation {devs[-1]:.4g} <= {delta_d} up to sigma={grid[-1]:.3g}")
    j = next(i for i, d in enumerate(devs) if d > delta_d)
    lo, hi = float(grid[j - 1]), float(grid[j])
    while hi / lo > 1.0 + rel_width:
        mid = math.sqrt(lo * hi)
        if _deviation(mid, base, reference, mu, quad, window) > delta_d:
            hi = mid
        else:
            lo = mid
    return ThresholdResult(math.sqrt(lo * hi), int(L), float(alpha), float(delta_d), (lo, hi))


def _threshold_point(args):
    L, alpha, base, kwargs = args
    return deviation_threshold(L, alpha, base, **kwargs).sigma_t_d


def sigma_threshold_table(alpha_grid, L_list, base, workers=1, **kwargs):
    """Rows (L, alpha, sigma_t_d), ordered by alpha then L."""
    alphas = _increasing(alpha_grid, "alpha grid")
    Ls = [int(L) for L in _increasing(L_list, "L list")]
    jobs = [(L, a, base, kwargs) for a in alphas for L in Ls]
    values = ordered_map(_threshold_point, jobs, workers)
    rows = [(L, a, v) for (L, a, _, _), v in zip(jobs, values)]
    return SweepTable(("L", "alpha", "sigma_t_d"), rows, inputs=("alpha", "L"))


def s_exponent_curve(alpha_grid, L_list, base, thresholds=None, workers=1, **kwargs):
    """Rows (alpha, s, r_squared) from power-law fits sigma_t_d ~ L^-s."""
    if thresholds is None:
        thresholds = sigma_threshold_table(alpha_grid, L_list, base, workers, **kwargs)
    Ls = thresholds.column("L")
    alphas = thresholds.column("alpha")
    sds = thresholds.column("sigma_t_d")
    rows = []
    for a in _increasing(alpha_grid, "alpha grid"):
        m = alphas == a
        fit = power_law_fit(Ls[m], sds[m])
        rows.append((a, -fit.slope, fit.r_squared))
    return SweepTable(("alpha", "s", "r_squared"), rows)


def _scaling_point(args):
    L, s, base, quad, window = args
    return max_averaged_qfi(s, base.replace(L=L), window, mu=base.mu, quad=quad).f_bar_max


def uncertain_scaling(alpha, L_list, sigma_grid, base, quad=None, window=None, workers=1):
    """Rows (L, f_bar_max, sigma_t) ordered by L then sigma_t."""
    Ls = [int(L) for L in _increasing(L_list, "L list")]
    sigmas = _increasing(sigma_grid, "sigma grid")
    base = base.replace(alpha=alpha)
    jobs = [(L, s, base, quad, window) for L in Ls for s in sigmas]
    values = ordered_map(_scaling_point, jobs, workers)
    rows = [(L, v, s) for (L, s, _, _, _), v in zip(jobs, values)]
    return SweepTable(("L", "f_bar_max", "sigma_t"), rows, inputs=("L", "sigma_t"))


def uncertain_ratio(alpha, sigma_t, L, base, quad=None, window=None):
    """max Fbar at finite alpha over the same maximum with the sin k baseline."""
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    mu = base.mu
    num = max_averaged_qfi(sigma_t, base.replace(L=L, alpha=alpha), window, mu=mu, quad=quad)
    den = max_averaged_qfi(sigma_t, base.replace(L=L, alpha=math.inf), window, mu=mu, quad=quad)
    return num.f_bar_max / den.f_bar_max


def _ratio_point(args):
    alpha, s, L, base, quad, window = args
    return max_averaged_qfi(s, base.replace(L=L, alpha=alpha), window,
                            mu=base.mu, quad=quad).f_bar_max


def uncertain_ratio_table(alpha_grid, sigma_grid, L, base, quad=None, window=None, workers=1):
    """Rows (alpha, sigma_t, r); the short-range maxima are computed once per sigma."""
    alphas = _increasing(alpha_grid, "alpha grid")
    sigmas = _increasing(sigma_grid, "sigma grid")
    jobs = [(a, s, L, base, quad, window) for a in [math.inf] + alphas for s in sigmas]
    values = ordered_map(_ratio_point, jobs, workers)
    n = len(sigmas)
    baseline, rest = values[:n], values[n:]
    rows = [(a, s, rest[i * n + j] / baseline[j])
            for i, a in enumerate(alphas) for j, s in enumerate(sigmas)]
    return SweepTable(("alpha", "sigma_t", "r"), rows, inputs=("alpha", "sigma_t"))


def _increasing(values, what):
    vals = [float(v) for v in values]
    if not vals:
        raise DomainError(f"{what} is empty")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise DomainError(f"{what} must be strictly increasing")
    return vals
