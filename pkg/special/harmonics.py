"""Real and complex spherical harmonics in the cos(theta) variable.

The default phase carries no Condon-Shortley factor; the Condon-Shortley
variant multiplies every harmonic by ``(-1)**|M|``. Real harmonics use
``cos(M phi)`` for ``M > 0`` and ``sin(|M| phi)`` for ``M < 0``, each with
``1/sqrt(pi)``, and ``1/sqrt(2 pi)`` for ``M = 0``, so that they are
orthonormal on the unit sphere.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Union

import mpmath

from common.errors import PrecisionDomainError
from precision.context import BigReal, PrecisionContext, RealLike
from special.legendre import normalized_legendre_series


class Phase(Enum):
    PLAIN = "plain"
    CONDON_SHORTLEY = "condon-shortley"


class Kind(Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class HarmonicConvention:
    """Phase and kind of the spherical harmonics in use."""

    phase: Phase = Phase.PLAIN
    kind: Kind = Kind.REAL


DEFAULT_CONVENTION = HarmonicConvention()


def azimuthal_factor(M: int, phi: BigReal) -> BigReal:
    """Normalized real azimuthal function of a real harmonic."""
    if M == 0:
        return 1 / mpmath.sqrt(2 * mpmath.pi)
    if M > 0:
        return mpmath.cos(M * phi) / mpmath.sqrt(mpmath.pi)
    return mpmath.sin(-M * phi) / mpmath.sqrt(mpmath.pi)


def spherical_harmonic(L: int, M: int, nu: RealLike, phi: RealLike,
                       conv: HarmonicConvention, ctx: PrecisionContext) -> Union[BigReal, mpmath.mpc]:
    """Spherical harmonic of degree L and order M at ``(nu = cos theta, phi)``.

    Returns a real number for the real kind and an ``mpc`` for the complex
    kind.

    Raises:
        PrecisionDomainError: If ``|M| > L`` or ``nu`` lies outside ``[-1, 1]``.
    """
    if L < 0 or abs(M) > L:
        raise PrecisionDomainError("spherical_harmonic", f"need |M| <= L, got L={L}, M={M}")
    with ctx.workdps():
        nu = mpmath.mpf(nu)
        phi = mpmath.mpf(phi)
        if abs(nu) > 1:
            raise PrecisionDomainError("spherical_harmonic", f"nu must lie in [-1, 1], got {nu}")
        theta_part = normalized_legendre_series(L, abs(M), nu)[-1]
        if conv.phase is Phase.CONDON_SHORTLEY:
            theta_part *= (-1) ** abs(M)
        if conv.kind is Kind.COMPLEX:
            return theta_part * mpmath.expj(M * phi) / mpmath.sqrt(2 * mpmath.pi)
        return theta_part * azimuthal_factor(M, phi)
