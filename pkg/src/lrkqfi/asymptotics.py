"""Riemann zeta and the near-k=pi behaviour of the pairing function."""
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

ALPHA2_WINDOW = 1e-3
_BORWEIN_N = 50


def _borwein_coefficients(n):
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), kept exact until the
    # differences d_k - d_n are formed
    d, acc = [], Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4 ** i,
                        math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return [float((d[k] - dn) / dn) for k in range(n)]


_ETA_WEIGHTS = _borwein_coefficients(_BORWEIN_N)


def eta(s):
    """Dirichlet eta via Borwein's accelerated alternating series (s > 0)."""
    total = 0.0
    for k, c in enumerate(_ETA_WEIGHTS):
        term = c / (k + 1) ** s
        total += -term if k % 2 == 0 else term
    return total


def zeta(s):
    """Riemann zeta(s) = eta(s) / (1 - 2^(1-s)) for real s > 0, s != 1."""
    s = float(s)
    if not s > 0:
        raise DomainError(f"zeta needs s > 0, got {s}")
    if abs(s - 1.0) <= 1e-6:
        raise DomainError(f"zeta has a pole at s = 1 (got {s})")
    return eta(s) / -math.expm1((1.0 - s) * math.log(2.0))


@dataclass(frozen=True)
class ExpansionCoefficient:
    alpha: float
    value: float
    is_log_corrected: bool


def expansion_coefficient(alpha):
    """Slope of the zeta(alpha)-normalised pairing near k = pi.

    value = (1 - 2^(2-alpha)) zeta(alpha-1) / zeta(alpha) away from alpha = 2;
    inside |alpha - 2| <= 1e-3 the expansion carries a logarithm and value
    holds its prefactor 6/pi^2.
    """
    alpha = float(alpha)
    if not alpha > 1:
        raise DomainError(f"alpha must be > 1, got {alpha}")
    if abs(alpha - 2.0) <= ALPHA2_WINDOW:
        return ExpansionCoefficient(alpha, 6.0 / math.pi ** 2, True)
    if math.isinf(alpha):
        return ExpansionCoefficient(alpha, 1.0, False)
    value = -math.expm1((2.0 - alpha) * math.log(2.0)) * zeta(alpha - 1.0) / zeta(alpha)
    return ExpansionCoefficient(alpha, value, False)


def pairing_expansion(k, alpha, normalized=False):
    """Leading small-(pi - k) form of the open-convention pairing function.

    The expansion coefficients describe the pairing divided by its norm
    sum_y y^-alpha = zeta(alpha); with ``normalized=False`` (default) the
    result is multiplied back by zeta(alpha) so it approximates the
    unnormalised sum used by the Hamiltonian.
    """
    x = math.pi - float(getattr(k, "k", k))
    if not 0.0 < x < 0.5:
        raise DomainError(f"pi - k must lie in (0, 0.5), got {x}")
    c = expansion_coefficient(alpha)
    if c.is_log_corrected:
        value = c.value * (2.0 * math.log(2.0) - 1.0 - math.log(x)) * x
    else:
        value = c.value * x
    if normalized or math.isinf(c.alpha):
        return value
    return value * zeta(c.alpha)


def predicted_max_qfi(L, alpha=None):
    """L^2 / pi^2: the peak-QFI scaling with unit prefactor (exponent checks only)."""
    if isinstance(L, bool) or int(L) != L or L < 4 or L % 2:
        raise DomainError(f"L must be an even integer >= 4, got {L!r}")
    return L * L / math.pi ** 2
