"""Prolate spheroidal frame of a three-center arrangement.

The local z-axis runs from center A to center B. ``xi_C`` and ``nu_C`` follow
from the distances of C to both foci; ``phi_C`` is the azimuth of C's
component transverse to AB, measured from the lab x-axis projected onto the
transverse plane (the lab y-axis when x is parallel to AB).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple

import mpmath

from common.errors import (DegenerateGeometryError, PrecisionDomainError, SingularGeometryError,
                           UnsupportedOrientationError)
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext, RealLike

logger = setup_logger(__name__)

Vector = Tuple[BigReal, BigReal, BigReal]


class Alignment(Enum):
    """Direction of the A->B axis relative to the lab z-axis."""

    PARALLEL = "parallel"
    ANTIPARALLEL = "antiparallel"
    OBLIQUE = "oblique"


class PolarAxes(Enum):
    """Polar axes the two orbital harmonics are quantized along.

    COMMON quantizes both orbitals along A->B, so the integral is the plain
    real-space one. FACING measures theta_B from B toward A,
    ``cos theta_B = (1 - xi nu)/(xi - nu)``; the orbital on B then differs by
    ``(-1)**(l' - |m'|)``. The published tables use FACING.
    """

    COMMON = "common"
    FACING = "facing"

    def b_sign(self, l: int, m: int) -> int:
        """Factor taking a FACING value to this convention for a B orbital ``(l, m)``."""
        if self is PolarAxes.FACING:
            return 1
        return -1 if (l - abs(m)) % 2 else 1


@dataclass(frozen=True)
class ProlateFrame:
    """Coordinates of center C in the prolate spheroidal system on A and B.

    Attributes:
        R_AB: Internuclear distance in bohr
        xi_c: ``(R_AC + R_BC) / R_AB``, at least 1
        nu_c: ``(R_AC - R_BC) / R_AB`` in ``[-1, 1]``
        phi_c: Azimuth of C in ``[0, 2 pi)``
        alignment: How A->B lies relative to the lab z-axis
    """

    R_AB: BigReal
    xi_c: BigReal
    nu_c: BigReal
    phi_c: BigReal
    alignment: Alignment = Alignment.PARALLEL

    def __post_init__(self):
        if not self.R_AB > 0:
            raise PrecisionDomainError("ProlateFrame", f"R_AB must be positive, got {self.R_AB}")
        if not self.xi_c >= 1:
            raise PrecisionDomainError("ProlateFrame", f"xi_C must be at least 1, got {self.xi_c}")
        if abs(self.nu_c) > 1:
            raise PrecisionDomainError("ProlateFrame", f"nu_C must lie in [-1, 1], got {self.nu_c}")
        if not 0 <= self.phi_c < 2 * mpmath.pi:
            raise PrecisionDomainError("ProlateFrame", f"phi_C must lie in [0, 2 pi), got {self.phi_c}")

    @property
    def R_AC(self) -> BigReal:
        return self.R_AB * (self.xi_c + self.nu_c) / 2

    @property
    def R_BC(self) -> BigReal:
        return self.R_AB * (self.xi_c - self.nu_c) / 2

    def swapped(self) -> "ProlateFrame":
        """Frame seen with the roles of A and B exchanged."""
        return ProlateFrame(self.R_AB, self.xi_c, -self.nu_c, self.phi_c, self.alignment)

    def check_orientation(self, m: int, m_prime: int) -> None:
        """Reject orbitals with ``m != 0`` unless A->B runs along the lab z-axis.

        Raises:
            UnsupportedOrientationError: For m != 0 orbitals in a rotated frame.
        """
        if (m or m_prime) and self.alignment is not Alignment.PARALLEL:
            raise UnsupportedOrientationError(
                f"orbitals with m={m}, m'={m_prime} need the A->B axis along +z, "
                f"but it is {self.alignment.value}; only m = 0 orbitals may be used here"
            )


def _vector(point: Sequence[RealLike], ctx: PrecisionContext) -> Vector:
    if len(point) != 3:
        raise PrecisionDomainError("geometry_from_cartesian", f"expected 3 coordinates, got {len(point)}")
    return tuple(ctx.real(c) for c in point)


def _sub(a: Vector, b: Vector) -> Vector:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _dot(a: Vector, b: Vector) -> BigReal:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm(a: Vector) -> BigReal:
    return mpmath.sqrt(_dot(a, a))


def _scale(a: Vector, s: BigReal) -> Vector:
    return (a[0] * s, a[1] * s, a[2] * s)


def _cross(a: Vector, b: Vector) -> Vector:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _transverse_axis(axis: Vector, lab: Vector) -> Vector:
    projected = _sub(lab, _scale(axis, _dot(lab, axis)))
    return _scale(projected, 1 / _norm(projected))


def geometry_from_cartesian(A: Sequence[RealLike], B: Sequence[RealLike], C: Sequence[RealLike],
                            ctx: PrecisionContext) -> ProlateFrame:
    """Prolate frame of C relative to the foci A and B (Cartesian bohr).

    Raises:
        DegenerateGeometryError: If A and B coincide.
        SingularGeometryError: If C lies on the closed segment AB (``xi_C = 1``).
    """
    with ctx.workdps():
        a, b, c = _vector(A, ctx), _vector(B, ctx), _vector(C, ctx)
        ab = _sub(b, a)
        R_AB = _norm(ab)
        if R_AB == 0:
            raise DegenerateGeometryError(f"centers A and B coincide at {tuple(map(str, a))}")
        axis = _scale(ab, 1 / R_AB)
        ac = _sub(c, a)
        R_AC = _norm(ac)
        R_BC = _norm(_sub(c, b))

        # C on the segment makes R_AC + R_BC equal R_AB up to rounding
        if R_AC + R_BC - R_AB <= 100 * mpmath.eps * R_AB:
            raise SingularGeometryError(mpmath.nstr((R_AC + R_BC) / R_AB, 10))
        xi_c = (R_AC + R_BC) / R_AB
        nu_c = max(mpmath.mpf(-1), min(mpmath.mpf(1), (R_AC - R_BC) / R_AB))

        transverse = _sub(ac, _scale(axis, _dot(ac, axis)))
        lab_x = (mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(0))
        lab_y = (mpmath.mpf(0), mpmath.mpf(1), mpmath.mpf(0))
        tiny = 100 * mpmath.eps * max(R_AB, R_AC)
        if _norm(transverse) <= tiny:
            phi_c = mpmath.mpf(0)
        else:
            x_axis = _transverse_axis(axis, lab_x if _norm(_cross(axis, lab_x)) > tiny else lab_y)
            y_axis = _cross(axis, x_axis)
            phi_c = mpmath.atan2(_dot(transverse, y_axis), _dot(transverse, x_axis))
            if phi_c < 0:
                phi_c += 2 * mpmath.pi
            if phi_c >= 2 * mpmath.pi:
                phi_c = mpmath.mpf(0)

        if abs(axis[0]) <= tiny and abs(axis[1]) <= tiny:
            alignment = Alignment.PARALLEL if axis[2] > 0 else Alignment.ANTIPARALLEL
        else:
            alignment = Alignment.OBLIQUE
        frame = ProlateFrame(R_AB, xi_c, nu_c, phi_c, alignment)
    logger.debug(f"frame: R_AB={mpmath.nstr(R_AB, 12)} xi_C={mpmath.nstr(xi_c, 12)} "
                 f"nu_C={mpmath.nstr(nu_c, 12)} phi_C={mpmath.nstr(phi_c, 12)} ({alignment.value})")
    return frame
