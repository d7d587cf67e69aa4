"""Closed-form basic nuclear attraction integral of a one-center Slater function."""

import mpmath

from common.errors import PrecisionDomainError
from precision.context import BigReal, PrecisionContext, RealLike
from precision.gamma import gamma, incomplete_gamma_upper
from special.harmonics import DEFAULT_CONVENTION, HarmonicConvention, Kind, spherical_harmonic


def basic_nuclear_attraction(kappa: RealLike, lam: int, tau: int, z: RealLike, R: RealLike,
                             theta: RealLike, phi: RealLike, ctx: PrecisionContext,
                             convention: HarmonicConvention = DEFAULT_CONVENTION) -> BigReal:
    """Basic integral ``J_{kappa lam tau}(z, R)`` of a normalized Slater function against ``1/r_C``.

    The point charge sits at distance ``R`` in direction ``(theta, phi)``
    from the orbital center. The value is
    ``2^kappa/(2 lam+1) sqrt(2/z) Gamma(kappa+lam+2)/sqrt(Gamma(2 kappa+1)) (zR)^-(lam+1)
    [1 - Gamma(kappa+lam+2, zR)/Gamma(kappa+lam+2)
    + (zR)^(2 lam+1) Gamma(kappa-lam+1, zR)/Gamma(kappa+lam+2)] S_{lam tau}(cos theta, phi)``,
    which equals ``(1/4pi) int chi_{kappa lam tau} / r_C dV``.

    Raises:
        PrecisionDomainError: For ``z <= 0``, ``R <= 0``, ``|tau| > lam`` or ``kappa < lam``.
    """
    if lam < 0 or abs(tau) > lam:
        raise PrecisionDomainError("basic_nuclear_attraction", f"need |tau| <= lam, got lam={lam}, tau={tau}")
    if convention.kind is not Kind.REAL:
        raise PrecisionDomainError("basic_nuclear_attraction", "only real harmonics are supported")
    with ctx.workdps():
        kappa, z, R = ctx.real(kappa), ctx.real(z), ctx.real(R)
        theta, phi = ctx.real(theta), ctx.real(phi)
        if not z > 0:
            raise PrecisionDomainError("basic_nuclear_attraction", f"z must be positive, got {z}")
        if not R > 0:
            raise PrecisionDomainError("basic_nuclear_attraction", f"R must be positive, got {R}")
        if kappa < lam:
            raise PrecisionDomainError("basic_nuclear_attraction", f"kappa must be >= lam, got {kappa} < {lam}")
        zR = z * R
        big = kappa + lam + 2
        gamma_big = gamma(big, ctx)
        bracket = (1 - incomplete_gamma_upper(big, zR, ctx) / gamma_big
                   + zR ** (2 * lam + 1) * incomplete_gamma_upper(kappa - lam + 1, zR, ctx) / gamma_big)
        radial = (mpmath.mpf(2) ** kappa / (2 * lam + 1) * mpmath.sqrt(2 / z)
                  * gamma_big / mpmath.sqrt(gamma(2 * kappa + 1, ctx)) * zR ** (-(lam + 1)) * bracket)
        return radial * spherical_harmonic(lam, tau, mpmath.cos(theta), phi, convention, ctx)
