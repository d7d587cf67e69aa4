"""Associated Legendre functions of the first and second kind.

Conventions:
    * ``P_L^M(x)`` carries no Condon-Shortley phase. On ``[-1, 1]`` it is
      ``(1 - x**2)**(M/2) d^M P_L/dx^M``; on ``(1, inf)`` the factor is
      ``(x**2 - 1)**(M/2)``, so the function is real and positive for large x.
    * ``Q_L^M(xi) = (xi**2 - 1)**(M/2) d^M Q_L/dxi^M`` on ``(1, inf)``; its sign
      is ``(-1)**M``.
    * ``Pbar_{l lambda}(x) = sqrt((2l+1)/2 (l-lambda)!/(l+lambda)!) P_l^lambda(x)``
      is normalized to one on ``[-1, 1]``.

The ``*_series`` helpers return whole columns in the degree and work at the
caller's current mpmath precision; integrands use them so that all degrees
needed at one node come out of a single recurrence.
"""

from enum import Enum
from functools import lru_cache
from typing import List

import mpmath

from common.errors import PrecisionDomainError
from common.logging_config import setup_logger
from precision.binomial import binomial
from precision.context import BigReal, PrecisionContext, RealLike

logger = setup_logger(__name__)


class LegendreStrategy(Enum):
    """How normalized associated Legendre functions are evaluated."""

    EXPLICIT = "explicit"
    RECURRENCE = "recurrence"
    NATIVE = "native"

    @classmethod
    def parse(cls, name: str) -> "LegendreStrategy":
        try:
            return cls(name.strip().lower())
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise PrecisionDomainError("LegendreStrategy", f"unknown strategy {name!r}; choose from {choices}")


def _check_orders(operation: str, degree: int, order: int) -> None:
    if degree < 0 or order < 0:
        raise PrecisionDomainError(operation, f"degree and order must be nonnegative, got ({degree}, {order})")
    if order > degree:
        raise PrecisionDomainError(operation, f"order {order} exceeds degree {degree}")


def _double_factorial_odd(m: int) -> int:
    """(2m-1)!! with (-1)!! = 1."""
    value = 1
    for k in range(1, 2 * m, 2):
        value *= k
    return value


def legendre_p_series(l_max: int, M: int, x: BigReal) -> List[BigReal]:
    """``[P_M^M(x), ..., P_{l_max}^M(x)]`` for any real x.

    Returns an empty list when ``l_max < M``.
    """
    if l_max < M:
        return []
    one = mpmath.mpf(1)
    if abs(x) <= 1:
        s = mpmath.sqrt(max(one - x * x, 0))
    else:
        s = mpmath.sqrt(x * x - one)
    current = _double_factorial_odd(M) * s ** M
    values = [current]
    if l_max == M:
        return values
    previous, current = current, (2 * M + 1) * x * current
    values.append(current)
    for L in range(M + 1, l_max):
        previous, current = current, ((2 * L + 1) * x * current - (L + M) * previous) / (L - M + 1)
        values.append(current)
    return values


def _q_extra_digits(l_max: int, xi: BigReal) -> int:
    """Digits lost by upward recurrence of the minimal solution Q_L."""
    with mpmath.workdps(15):
        growth = mpmath.log10(xi + mpmath.sqrt(xi * xi - 1))
        return int(mpmath.ceil((2 * l_max + 2) * growth)) + 5


def legendre_q_table(l_max: int, m_max: int, xi: BigReal) -> List[List[BigReal]]:
    """Table ``t[M][L] = Q_L^M(xi)`` for ``0 <= L <= l_max``, ``0 <= M <= m_max``.

    The upward recurrence in L is unstable for the decaying Q_L, so it runs
    with enough extra digits to absorb the growth of the dominant solution;
    entries are rounded back to the caller's precision.
    """
    extra = _q_extra_digits(l_max, xi)
    with mpmath.extradps(extra):
        xi = mpmath.mpf(xi)
        s2 = xi * xi - 1
        s = mpmath.sqrt(s2)
        q0 = [mpmath.log((xi + 1) / (xi - 1)) / 2]
        if l_max >= 1:
            q0.append(xi * q0[0] - 1)
        for L in range(1, l_max):
            q0.append(((2 * L + 1) * xi * q0[L] - L * q0[L - 1]) / (L + 1))
        table = [q0]
        if m_max >= 1:
            q1 = [-1 / s] + [L * (xi * q0[L] - q0[L - 1]) / s for L in range(1, l_max + 1)]
            table.append(q1)
        for M in range(0, m_max - 1):
            lower, middle = table[M], table[M + 1]
            table.append([
                -2 * (M + 1) * xi / s * middle[L] + (L - M) * (L + M + 1) * lower[L]
                for L in range(l_max + 1)
            ])
    return [[+value for value in row] for row in table]


def legendre_p(L: int, M: int, x: RealLike, ctx: PrecisionContext) -> BigReal:
    """Associated Legendre function of the first kind ``P_L^M(x)``.

    Defined on ``[-1, 1]`` and on ``(1, inf)``; see the module conventions.
    """
    _check_orders("legendre_p", L, M)
    with ctx.workdps():
        x = mpmath.mpf(x)
        if x < -1:
            raise PrecisionDomainError("legendre_p", f"x must be >= -1, got {x}")
        return legendre_p_series(L, M, x)[-1]


def legendre_q(L: int, M: int, xi: RealLike, ctx: PrecisionContext) -> BigReal:
    """Associated Legendre function of the second kind ``Q_L^M(xi)`` for ``xi > 1``."""
    _check_orders("legendre_q", L, M)
    with ctx.workdps():
        xi = mpmath.mpf(xi)
        if not xi > 1:
            raise PrecisionDomainError("legendre_q", f"xi must exceed 1 (log singularity at 1), got {xi}")
        return legendre_q_table(L, M, xi)[M][L]


@lru_cache(maxsize=2048)
def _explicit_coefficients(l: int, lam: int, dps: int) -> tuple:
    """Coefficients b^k of the explicit polynomial form of Pbar_{l lambda}."""
    ctx = PrecisionContext(max(dps - 15, 1), 15)
    with mpmath.workdps(dps):
        prefactor = mpmath.sqrt(
            mpmath.mpf(2 * l + 1) / (2 * binomial(l, lam, ctx) * binomial(l + lam, lam, ctx))
        ) / mpmath.mpf(2) ** l
        coefficients = []
        for k in range((l - lam) // 2 + 1):
            coefficients.append(
                prefactor * (-1) ** k * binomial(lam + k, k, ctx) * binomial(2 * l - 2 * k, l - k, ctx)
                * binomial(l - k, l - lam - 2 * k, ctx)
            )
        return tuple(coefficients)


def _normalized_explicit(l: int, lam: int, x: BigReal) -> BigReal:
    coefficients = _explicit_coefficients(l, lam, mpmath.mp.dps)
    total = mpmath.mpf(0)
    x2 = x * x
    # Horner in x**2; b^0 multiplies the highest power
    for coefficient in coefficients:
        total = total * x2 + coefficient
    if (l - lam) % 2:
        total *= x
    return total * mpmath.sqrt(max(1 - x2, 0)) ** lam


def normalized_legendre_series(l_max: int, lam: int, x: BigReal) -> List[BigReal]:
    """``[Pbar_{lam lam}(x), ..., Pbar_{l_max lam}(x)]`` by the normalized recurrence.

    Uses ``Pbar_l = a_l (x Pbar_{l-1} - Pbar_{l-2} / a_{l-1})`` with
    ``a_l = sqrt((4 l^2 - 1) / (l^2 - lam^2))``.
    """
    if l_max < lam:
        return []
    s = mpmath.sqrt(max(1 - x * x, 0))
    start = mpmath.sqrt(mpmath.mpf(2 * lam + 1) / (2 * mpmath.factorial(2 * lam)))
    current = start * _double_factorial_odd(lam) * s ** lam
    values = [current]
    if l_max == lam:
        return values
    a_previous = mpmath.sqrt(2 * lam + 3)
    previous, current = current, a_previous * x * current
    values.append(current)
    for l in range(lam + 2, l_max + 1):
        a_l = mpmath.sqrt(mpmath.mpf(4 * l * l - 1) / (l * l - lam * lam))
        previous, current = current, a_l * (x * current - previous / a_previous)
        a_previous = a_l
        values.append(current)
    return values


def _normalized_native(l: int, lam: int, x: BigReal) -> BigReal:
    # mpmath's Ferrers function carries the (-1)**lam Condon-Shortley phase
    norm = mpmath.sqrt(mpmath.mpf(2 * l + 1) / 2 * mpmath.factorial(l - lam) / mpmath.factorial(l + lam))
    return (-1) ** lam * norm * mpmath.legenp(l, lam, x, type=2)


def normalized_legendre_at(l: int, lam: int, x: BigReal,
                           strategy: LegendreStrategy = LegendreStrategy.RECURRENCE) -> BigReal:
    """Unchecked ``Pbar_{l lam}(x)`` at the caller's current precision."""
    if strategy is LegendreStrategy.EXPLICIT:
        return _normalized_explicit(l, lam, x)
    if strategy is LegendreStrategy.NATIVE:
        return _normalized_native(l, lam, x)
    return normalized_legendre_series(l, lam, x)[-1]


def normalized_legendre(l: int, lam: int, x: RealLike,
                        strategy: LegendreStrategy, ctx: PrecisionContext) -> BigReal:
    """Normalized associated Legendre function ``Pbar_{l lambda}(x)`` on ``[-1, 1]``.

    Args:
        l: Degree
        lam: Order, ``0 <= lam <= l``
        x: Argument in ``[-1, 1]``
        strategy: Explicit polynomial form, normalized recurrence, or the
            host library's Ferrers function rescaled to this normalization
        ctx: Precision context

    Raises:
        PrecisionDomainError: If ``lam > l`` or ``|x| > 1``.
    """
    _check_orders("normalized_legendre", l, lam)
    with ctx.workdps():
        x = mpmath.mpf(x)
        if abs(x) > 1:
            raise PrecisionDomainError("normalized_legendre", f"x must lie in [-1, 1], got {x}")
        return normalized_legendre_at(l, lam, x, strategy)


def get_cache_stats() -> dict:
    """Cache statistics of the explicit-form coefficient table."""
    info = _explicit_coefficients.cache_info()
    total = info.hits + info.misses
    return {
        "hits": info.hits,
        "misses": info.misses,
        "size": info.currsize,
        "maxsize": info.maxsize,
        "hit_rate": info.hits / total if total > 0 else 0.0,
    }


def clear_cache():
    """Clear the explicit-form coefficient cache."""
    _explicit_coefficients.cache_clear()


def explicit_coefficient_bound(l: int, lam: int, ctx: PrecisionContext) -> BigReal:
    """``sum_k |b^k|``: bounds ``|Pbar_{l lam}(x)| / (1-x^2)^(lam/2)`` on ``[-1, 1]``."""
    _check_orders("explicit_coefficient_bound", l, lam)
    with ctx.workdps():
        return mpmath.fsum(abs(b) for b in _explicit_coefficients(l, lam, ctx.working_digits))
