"""Slater-type orbital description."""

from dataclasses import dataclass

import mpmath

from auxiliary.functions import OrbitalIndices
from common.errors import PrecisionDomainError
from precision.context import BigReal, PrecisionContext, RealLike

SHELL_LETTERS = "spdfghik"


@dataclass(frozen=True)
class Orbital:
    """Slater-type orbital ``r^(n-1) exp(-zeta r) S_lm`` with real principal number ``n``.

    Attributes:
        n: Principal quantum number, positive and possibly noninteger
        l: Angular momentum, ``0 <= l <= floor(n)``
        m: Real-harmonic order, ``|m| <= l`` (negative selects the sine harmonic)
        zeta: Orbital exponent in inverse bohr
    """

    n: BigReal
    l: int
    m: int
    zeta: BigReal

    def __post_init__(self):
        if not self.n > 0:
            raise PrecisionDomainError("Orbital", f"n must be positive, got {self.n}")
        if int(self.l) != self.l or not 0 <= self.l <= int(mpmath.floor(self.n)):
            raise PrecisionDomainError("Orbital", f"need integer 0 <= l <= floor(n), got n={self.n}, l={self.l}")
        if int(self.m) != self.m or abs(self.m) > self.l:
            raise PrecisionDomainError("Orbital", f"need integer |m| <= l, got l={self.l}, m={self.m}")
        if not self.zeta > 0:
            raise PrecisionDomainError("Orbital", f"zeta must be positive, got {self.zeta}")

    @classmethod
    def of(cls, n: RealLike, l: int, m: int, zeta: RealLike, ctx: PrecisionContext) -> "Orbital":
        """Build an orbital, reading ``n`` and ``zeta`` at working precision."""
        return cls(ctx.real(n), int(l), int(m), ctx.real(zeta))

    @property
    def indices(self) -> OrbitalIndices:
        return OrbitalIndices(self.n, self.l, self.m)

    @property
    def label(self) -> str:
        """Short name such as ``2s`` or ``2.1p-1``."""
        n_text = mpmath.nstr(self.n, 6)
        if n_text.endswith(".0"):
            n_text = n_text[:-2]
        letter = SHELL_LETTERS[self.l] if self.l < len(SHELL_LETTERS) else f"[l={self.l}]"
        return f"{n_text}{letter}" + (f"{self.m:+d}" if self.m else "")
