"""Momentum-space solution of the long-range Kitaev chain.

Each positive momentum k pairs with -k into a 2x2 block

    H_k = [[-(mu + t cos k), f(k)], [f(k), mu + t cos k]]

whose ground state is cos(theta_k)|00> + sin(theta_k)|11>.  Everything the
metrology code needs follows from g = mu + t cos k and the pairing function f.
"""
import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from .cache import PairingCache, default_cache, distance_weights, pairing_sum
from .errors import DomainError, SingularModeError

GAPLESS_EPS = 1e-14


class Convention(str, Enum):
    """Distance rule entering the power-law pairing.

    OPEN uses d_y = y and reduces to f = sin k as alpha -> infinity.
    RING uses d_y = min(y, L - y); on the antiperiodic grid y and L - y then
    contribute equally, so its short-range limit is 2 sin k.
    """

    OPEN = "open"
    RING = "ring"


@dataclass(frozen=True)
class ModelParams:
    L: int
    alpha: float
    t: float = 1.0
    mu: float = 1.0
    delta: float = 1.0
    convention: Convention = Convention.OPEN

    def __post_init__(self):
        if isinstance(self.L, bool) or int(self.L) != self.L:
            raise DomainError(f"L must be an integer, got {self.L!r}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "convention", Convention(self.convention))
        for name in ("alpha", "t", "mu", "delta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.L < 4 or self.L % 2:
            raise DomainError(f"L must be even and >= 4, got {self.L}")
        if not self.alpha > 1:
            raise DomainError(f"alpha must be > 1, got {self.alpha}")
        if not self.delta > 0:
            raise DomainError(f"delta must be > 0, got {self.delta}")
        if not (math.isfinite(self.t) and math.isfinite(self.mu)):
            raise DomainError("t and mu must be finite")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    @property
    def short_range(self):
        return math.isinf(self.alpha)


class Momentum(NamedTuple):
    k: float
    n: int

    def __float__(self):
        return self.k


@dataclass(frozen=True)
class ModeState:
    k: float
    f: float
    g: float
    epsilon: float
    theta: float
    gapless: bool = False


@dataclass(frozen=True)
class QfiMatrix2:
    """Symmetric QFI matrix over the parameter pair (t, mu)."""

    f_tt: float
    f_tmu: float
    f_mumu: float

    def __add__(self, other):
        return QfiMatrix2(self.f_tt + other.f_tt, self.f_tmu + other.f_tmu,
                          self.f_mumu + other.f_mumu)

    @property
    def det(self):
        return self.f_tt * self.f_mumu - self.f_tmu * self.f_tmu

    @property
    def trace(self):
        return self.f_tt + self.f_mumu

    def as_array(self):
        return np.array([[self.f_tt, self.f_tmu], [self.f_tmu, self.f_mumu]])

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.as_array())


def _check_L(L):
    if isinstance(L, bool) or int(L) != L or L < 4 or L % 2:
        raise DomainError(f"L must be an even integer >= 4, got {L!r}")
    return int(L)


def momentum_grid(L):
    """Positive antiperiodic momenta k = (2n+1)pi/L, ascending."""
    L = _check_L(L)
    return [Momentum((2 * n + 1) * math.pi / L, n) for n in range(L // 2)]


def momentum_array(L):
    L = _check_L(L)
    return (2 * np.arange(L // 2) + 1) * np.pi / L


def _k(k):
    return k.k if isinstance(k, Momentum) else float(k)


def pairing_function(k, params):
    """f_alpha(k) = delta * sum_{y=1}^{L-1} sin(k y) / d_y^alpha."""
    w = distance_weights(params.L, params.alpha, params.convention.value)
    return params.delta * pairing_sum(_k(k), w)


def pairing_table(params, cache: Optional[PairingCache] = None):
    """f_alpha on the positive grid, scaled by delta (cached per L, alpha, convention)."""
    cache = default_cache if cache is None else cache
    table = cache.table(params.L, params.alpha, params.convention.value)
    return table if params.delta == 1.0 else params.delta * table


def bogoliubov_angle(g, f):
    """theta with tan(2 theta) = -f / g, taken from atan2 so it is continuous in g, f."""
    if g == 0.0 and f == 0.0:
        return 0.0
    return 0.5 * math.atan2(-f, g)


def mode_state(k, params):
    kv = _k(k)
    f = pairing_function(k, params)
    g = params.mu + params.t * math.cos(kv)
    eps = math.sqrt(g * g + f * f)
    return ModeState(kv, f, g, eps, bogoliubov_angle(g, f), gapless=eps < GAPLESS_EPS)


def dispersion_curve(params, cache=None):
    """List of (k, epsilon) over the positive grid."""
    k = momentum_array(params.L)
    f = pairing_table(params, cache)
    g = params.mu + params.t * np.cos(k)
    eps = np.sqrt(g * g + f * f)
    return list(zip(k.tolist(), eps.tolist()))


def mode_qfi(k, params):
    """Rank-one QFI of one (k, -k) pair: 4 (d theta)(d theta)^T."""
    s = mode_state(k, params)
    if s.gapless or s.epsilon < GAPLESS_EPS:
        raise SingularModeError(s.k, mu=params.mu, t=params.t)
    e2 = s.g * s.g + s.f * s.f
    w = s.f * s.f / (e2 * e2)
    c = math.cos(s.k)
    return QfiMatrix2(w * c * c, w * c, w)


def _terms(params, cache):
    k = momentum_array(params.L)
    return np.cos(k), pairing_table(params, cache)


def _weights(mu, t, cosk, f):
    g = mu + t * cosk
    e2 = g * g + f * f
    if e2.min() < GAPLESS_EPS ** 2:
        i = int(np.argmin(e2.reshape(-1, e2.shape[-1]).min(axis=0)))
        raise SingularModeError(float(np.arccos(cosk[i])), mu=mu, t=t)
    return f * f / (e2 * e2)


def qfi_matrix(params, cache=None):
    cosk, f = _terms(params, cache)
    w = _weights(params.mu, params.t, cosk, f)
    return QfiMatrix2(float(np.sum(w * cosk * cosk)), float(np.sum(w * cosk)),
                      float(np.sum(w)))


def qfi_mu(params, cache=None):
    """F_mumu = sum_k f^2 / ((mu + t cos k)^2 + f^2)^2."""
    cosk, f = _terms(params, cache)
    return float(np.sum(_weights(params.mu, params.t, cosk, f)))


def qfi_mu_batch(params, mu=None, t=None, cache=None):
    """F_mumu over arrays of mu and/or t (broadcast together); other fields from params."""
    cosk, f = _terms(params, cache)
    mu = np.asarray(params.mu if mu is None else mu, dtype=float)
    t = np.asarray(params.t if t is None else t, dtype=float)
    mu, t = np.broadcast_arrays(mu, t)
    w = _weights(mu[..., None], t[..., None], cosk, f)
    return np.sum(w, axis=-1)


def _angle_differences(p1, p2, cache=None):
    if (p1.L, p1.alpha, p1.convention) != (p2.L, p2.alpha, p2.convention):
        raise DomainError("fidelity needs matching L, alpha and convention")
    cosk, f1 = _terms(p1, cache)
    f2 = pairing_table(p2, cache)
    g1 = p1.mu + p1.t * cosk
    g2 = p2.mu + p2.t * cosk
    # 2(theta1 - theta2) as a single atan2 avoids cancelling two O(1) angles
    return 0.5 * np.arctan2(g1 * f2 - f1 * g2, g1 * g2 + f1 * f2)


def _log_fidelity(dtheta):
    small = np.abs(dtheta) < 0.5
    s = np.sin(0.5 * dtheta)
    logs = np.where(small, np.log1p(-2.0 * s * s),
                    np.log(np.abs(np.cos(dtheta))))
    return float(np.sum(logs))


def ground_state_fidelity(p1, p2, cache=None):
    """|<Psi0(p1)|Psi0(p2)>| = prod_k |cos(theta_k(p1) - theta_k(p2))|."""
    return math.exp(_log_fidelity(_angle_differences(p1, p2, cache)))


def qfi_mu_oracle(params, delta=1e-5, cache=None):
    """Fidelity-susceptibility estimate 8 (1 - F(mu - d/2, mu + d/2)) / d^2.

    Independent of the closed-form QFI: it only uses ground-state overlaps.
    """
    if not 1e-7 <= delta <= 1e-3:
        raise DomainError(f"delta must lie in [1e-7, 1e-3], got {delta}")
    lo = params.replace(mu=params.mu - delta / 2)
    hi = params.replace(mu=params.mu + delta / 2)
    infidelity = -math.expm1(_log_fidelity(_angle_differences(lo, hi, cache)))
    return 8.0 * infidelity / (delta * delta)
