"""Binomial and generalized binomial coefficients.

``binomial(N, s)`` is exact integer arithmetic for integer ``N >= 0`` and
gamma-based otherwise. ``gen_binomial(N1, N2, s)`` is the coefficient of
``x**(N1+N2-s) * a**s`` in ``(x+a)**N1 * (x-a)**N2``.
"""

from functools import lru_cache
import math
from typing import Optional

import mpmath

from common.errors import PrecisionDomainError
from precision.context import BigReal, PrecisionContext, RealLike


def integer_value(value: RealLike) -> Optional[int]:
    """Return ``value`` as an int if it is integral, else None."""
    if isinstance(value, int):
        return value
    value = mpmath.mpf(value) if not isinstance(value, mpmath.mpf) else value
    if mpmath.isint(value):
        return int(value)
    return None


def _check_index(operation: str, s: int) -> None:
    if int(s) != s or s < 0:
        raise PrecisionDomainError(operation, f"s must be a nonnegative integer, got {s}")


@lru_cache(maxsize=4096)
def _exact_gen_binomial(n1: int, n2: int, s: int) -> int:
    """Integer generalized binomial with the finite summation bounds."""
    lower = max(0, s - n1)
    upper = min(s, n2)
    return sum((-1) ** k * math.comb(n1, s - k) * math.comb(n2, k) for k in range(lower, upper + 1))


def binomial(N: RealLike, s: int, ctx: PrecisionContext) -> BigReal:
    """Binomial coefficient ``F_s(N)`` for real ``N`` and integer ``s >= 0``."""
    _check_index("binomial", s)
    n_int = integer_value(N)
    with ctx.workdps():
        if n_int is not None and n_int >= 0:
            return mpmath.mpf(math.comb(n_int, int(s)))
        return mpmath.binomial(mpmath.mpf(N), int(s))


def gen_binomial(N1: RealLike, N2: RealLike, s: int, ctx: PrecisionContext) -> BigReal:
    """Generalized binomial coefficient ``F_s(N1, N2)``.

    For nonnegative integer ``N1, N2`` the inner index runs over
    ``max(0, s - N1) <= s' <= min(s, N2)``; for any other order the sum runs
    over ``0 <= s' <= s`` with gamma-based binomials.
    """
    _check_index("gen_binomial", s)
    s = int(s)
    n1 = integer_value(N1)
    n2 = integer_value(N2)
    if n1 is not None and n2 is not None and n1 >= 0 and n2 >= 0:
        with ctx.workdps():
            return mpmath.mpf(_exact_gen_binomial(n1, n2, s))
    with ctx.workdps():
        total = mpmath.mpf(0)
        for k in range(s + 1):
            total += (-1) ** k * binomial(N1, s - k, ctx) * binomial(N2, k, ctx)
        return total
