"""Coefficient families of the Neumann-expansion route.

    * ``a_coeff``: azimuthal integrals of three real harmonics, scaled so that
      ``int Phi_m Phi_m' Phi_M dphi = a_coeff(m, m', M) / sqrt(2 pi)``.
    * ``d_coeff``: polynomial coefficients of ``Pbar_{l lambda}`` in the form
      ``(1-x^2)^(lambda/2) sum_beta D_beta x^(beta-lambda)``.
    * ``g_coeff``: coefficients turning the product of the two angle-shifted
      normalized Legendre functions into monomials
      ``(xi nu)^q / ((xi+nu)^alpha (xi-nu)^beta)``.
    * ``norm_const``: the orbital normalization and volume-element factor.

Coefficient tables are memoized per working precision; the caches are
``functools.lru_cache`` instances and safe to share between threads.
"""

from functools import lru_cache
from typing import Tuple

import mpmath

from common.errors import PrecisionDomainError
from precision.binomial import binomial, gen_binomial
from precision.context import BigReal, PrecisionContext, RealLike
from precision.gamma import gamma

GTerm = Tuple[int, int, int, BigReal]


def _sign(value: int) -> int:
    # zero counts as positive
    return 1 if value >= 0 else -1


def _eta(m: int, m_prime: int, combined: int) -> int:
    if m == 0 or m_prime == 0 or combined == 0:
        return 0
    return _sign(m) * _sign(m_prime) * _sign(combined)


def a_coeff(m: int, m_prime: int, M: int, ctx: PrecisionContext) -> BigReal:
    """Azimuthal coefficient ``A^M_{m m'}``.

    ``M`` is the signed real-harmonic index: ``M < 0`` selects the sine
    harmonic. The value vanishes unless ``|M|`` equals ``|m - m'|`` or
    ``|m + m'|``.
    """
    epsilon = _sign(m) * _sign(m_prime)
    with ctx.workdps():
        value = mpmath.mpf(0)
        root2 = mpmath.sqrt(2)
        if M == epsilon * abs(m - m_prime):
            value += mpmath.sqrt(2 - abs(_eta(m, m_prime, m - m_prime))) / root2
        if M == epsilon * abs(m + m_prime):
            value += _eta(m, m_prime, m + m_prime) / root2
        return value


def allowed_orders(m: int, m_prime: int) -> Tuple[int, ...]:
    """Signed orders M with a nonzero ``A^M_{m m'}``, ascending."""
    epsilon = _sign(m) * _sign(m_prime)
    candidates = {epsilon * abs(m - m_prime)}
    if _eta(m, m_prime, m + m_prime) != 0:
        candidates.add(epsilon * abs(m + m_prime))
    return tuple(sorted(candidates))


@lru_cache(maxsize=8192)
def _d_coeff_cached(l: int, lam: int, beta: int, dps: int) -> BigReal:
    ctx = PrecisionContext(max(dps - 15, 1), 15)
    with mpmath.workdps(dps):
        half = (l - beta) // 2
        root = mpmath.sqrt(
            mpmath.mpf(2 * l + 1) / 2 * binomial(l + lam, l, ctx) / binomial(l, lam, ctx)
        )
        return ((-1) ** half * root * binomial(l, half, ctx) * binomial(l + beta, beta - lam, ctx)
                / mpmath.mpf(2) ** l)


def d_coeff(l: int, lam: int, beta: int, ctx: PrecisionContext) -> BigReal:
    """Coefficient ``D_beta^{l lambda}``; zero outside ``lambda <= beta <= l`` or for odd ``l - beta``."""
    if lam < 0 or lam > l or beta < lam or beta > l or (l - beta) % 2:
        with ctx.workdps():
            return mpmath.mpf(0)
    return _d_coeff_cached(l, lam, beta, ctx.working_digits)


def g_coeff(l: int, lam: int, l_prime: int, lam_prime: int, Lambda: int,
            alpha: int, beta: int, q: int, ctx: PrecisionContext) -> BigReal:
    """Expansion coefficient ``g_{alpha beta}^q(l lambda, l' lambda'; Lambda)``.

    The product ``[(xi^2-1)(1-nu^2)]^(Lambda-(lambda+lambda')/2) Pbar_{l lambda}(cos theta_A)
    Pbar_{l' lambda'}(cos theta_B)`` equals the sum of these coefficients
    times ``(xi nu)^q / ((xi+nu)^alpha (xi-nu)^beta)`` over
    ``lambda - 2 Lambda <= alpha <= l``, ``lambda' <= beta <= l'`` and
    ``0 <= q <= alpha + beta + 2 Lambda - lambda - lambda'``. Indices
    outside those ranges give 0.
    """
    if Lambda < 0:
        raise PrecisionDomainError("g_coeff", f"Lambda must be nonnegative, got {Lambda}")
    first = alpha + 2 * Lambda - lam
    second = beta - lam_prime
    with ctx.workdps():
        if q < 0 or first < 0 or second < 0 or q > first + second:
            return mpmath.mpf(0)
        head = mpmath.mpf(0)
        d_beta = d_coeff(l_prime, lam_prime, beta, ctx)
        if d_beta == 0:
            return head
        for s in range(Lambda + 1):
            head += (-1) ** s * binomial(Lambda, s, ctx) * d_coeff(l, lam, alpha + 2 * Lambda - 2 * s, ctx)
        return head * d_beta * gen_binomial(first, second, q, ctx)


@lru_cache(maxsize=1024)
def _g_terms_cached(l: int, lam: int, l_prime: int, lam_prime: int, Lambda: int,
                    dps: int) -> Tuple[GTerm, ...]:
    ctx = PrecisionContext(max(dps - 15, 1), 15)
    terms = []
    for alpha in range(lam - 2 * Lambda, l + 1):
        for beta in range(lam_prime, l_prime + 1):
            top = alpha + beta + 2 * Lambda - lam - lam_prime
            for q in range(0, top + 1):
                value = g_coeff(l, lam, l_prime, lam_prime, Lambda, alpha, beta, q, ctx)
                if value != 0:
                    terms.append((alpha, beta, q, value))
    return tuple(terms)


def g_terms(l: int, lam: int, l_prime: int, lam_prime: int, Lambda: int,
            ctx: PrecisionContext) -> Tuple[GTerm, ...]:
    """All nonzero ``(alpha, beta, q, g)`` terms of the Legendre-product expansion."""
    return _g_terms_cached(l, lam, l_prime, lam_prime, Lambda, ctx.working_digits)


def norm_const(n: RealLike, n_prime: RealLike, zeta: RealLike, zeta_prime: RealLike,
               R: RealLike, ctx: PrecisionContext) -> BigReal:
    """Normalization constant ``N_{n n'}(zeta, zeta', R)``.

    ``(2 zeta)^(n+1/2) (2 zeta')^(n'+1/2) / sqrt(Gamma(2n+1) Gamma(2n'+1)) (R/2)^(n+n'+1)``.
    """
    with ctx.workdps():
        values = {name: mpmath.mpf(v) for name, v in
                  (("n", n), ("n'", n_prime), ("zeta", zeta), ("zeta'", zeta_prime), ("R", R))}
        for name, value in values.items():
            if not value > 0:
                raise PrecisionDomainError("norm_const", f"{name} must be positive, got {value}")
        n, n_prime = values["n"], values["n'"]
        zeta, zeta_prime, R = values["zeta"], values["zeta'"], values["R"]
        half = mpmath.mpf(1) / 2
        numerator = (2 * zeta) ** (n + half) * (2 * zeta_prime) ** (n_prime + half)
        denominator = mpmath.sqrt(gamma(2 * n + 1, ctx) * gamma(2 * n_prime + 1, ctx))
        return numerator / denominator * (R / 2) ** (n + n_prime + 1)


def get_cache_stats() -> dict:
    """Cache statistics for the memoized D and g tables."""
    stats = {}
    for name, cached in (("d_coeff", _d_coeff_cached), ("g_terms", _g_terms_cached)):
        info = cached.cache_info()
        total = info.hits + info.misses
        stats[name] = {
            "hits": info.hits,
            "misses": info.misses,
            "size": info.currsize,
            "maxsize": info.maxsize,
            "hit_rate": info.hits / total if total > 0 else 0.0,
        }
    return stats


def clear_cache():
    """Clear the coefficient caches."""
    _d_coeff_cached.cache_clear()
    _g_terms_cached.cache_clear()
