"""Working-precision context and the decimal-string codec for BigReal values.

All numerical code in this project works on ``mpmath.mpf`` numbers. A
``PrecisionContext`` fixes how many decimal digits the caller wants and how
many guard digits are carried on top of them; code runs its arithmetic
inside ``ctx.workdps()``.
"""

from contextlib import contextmanager
from dataclasses import dataclass
import os
from typing import Iterator, Optional, Union

import mpmath
from mpmath.libmp import repr_dps

from common.errors import PrecisionDomainError

BigReal = mpmath.mpf
RealLike = Union[mpmath.mpf, int, float, str]

DIGITS_ENV = "THREECENTER_DIGITS"
DEFAULT_TARGET_DIGITS = 20
DEFAULT_GUARD_DIGITS = 15
MIN_GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal precision requested by a caller.

    Attributes:
        target_digits: Significant decimal digits the caller relies on
        guard_digits: Extra digits carried through every computation
    """

    target_digits: int = DEFAULT_TARGET_DIGITS
    guard_digits: int = DEFAULT_GUARD_DIGITS

    def __post_init__(self):
        if self.target_digits < 1:
            raise PrecisionDomainError(
                "PrecisionContext", f"target_digits must be positive, got {self.target_digits}"
            )
        if self.guard_digits < MIN_GUARD_DIGITS:
            raise PrecisionDomainError(
                "PrecisionContext",
                f"guard_digits must be at least {MIN_GUARD_DIGITS}, got {self.guard_digits}",
            )

    @property
    def working_digits(self) -> int:
        """Decimal digits used for arithmetic."""
        return self.target_digits + self.guard_digits

    @classmethod
    def from_env(cls, guard_digits: int = DEFAULT_GUARD_DIGITS) -> "PrecisionContext":
        """Build a context whose target comes from ``THREECENTER_DIGITS``."""
        raw = os.environ.get(DIGITS_ENV, "").strip()
        if not raw:
            return cls(DEFAULT_TARGET_DIGITS, guard_digits)
        try:
            digits = int(raw)
        except ValueError:
            raise PrecisionDomainError(DIGITS_ENV, f"expected an integer, got {raw!r}")
        return cls(digits, guard_digits)

    def with_target(self, target_digits: int) -> "PrecisionContext":
        """Return a copy with a different target and the same guard."""
        return PrecisionContext(target_digits, self.guard_digits)

    @contextmanager
    def workdps(self, extra: int = 0) -> Iterator[None]:
        """Run the enclosed block at working precision (plus ``extra`` digits)."""
        with mpmath.workdps(self.working_digits + extra):
            yield

    def real(self, value: RealLike) -> BigReal:
        """Convert ``value`` to a BigReal rounded at working precision.

        Strings may carry the grouped report format (spaces between digit
        groups) and a typographic minus sign. Floats are read through their
        shortest decimal repr, so ``1.24`` means the decimal 1.24.
        """
        if isinstance(value, float):
            value = repr(value)
        if isinstance(value, str):
            value = value.replace(" ", "").replace("−", "-")
        with self.workdps():
            return mpmath.mpf(value)

    def tolerance(self, digits: Optional[int] = None) -> BigReal:
        """Relative tolerance ``10**-digits`` (target digits by default)."""
        with self.workdps():
            return mpmath.mpf(10) ** (-(self.target_digits if digits is None else digits))

    def to_decimal(self, value: BigReal, digits: Optional[int] = None) -> str:
        """Format ``value`` in scientific notation with ``digits`` significant digits.

        Rounds to nearest. The default is ``target_digits``. The exponent is
        written with an explicit sign and at least two digits (``E-02``).
        """
        digits = self.target_digits if digits is None else digits
        return format_scientific(value, digits)

    def serialize(self, value: BigReal) -> str:
        """Lossless decimal representation at working precision."""
        with self.workdps():
            return format_scientific(mpmath.mpf(value), repr_dps(mpmath.mp.prec))

    def agree(self, a: BigReal, b: BigReal, digits: Optional[int] = None) -> bool:
        """True if ``a`` and ``b`` agree to ``digits`` relative digits."""
        with self.workdps():
            return bool(mpmath.almosteq(a, b, rel_eps=self.tolerance(digits),
                                        abs_eps=mpmath.mpf(0)))


def format_scientific(value: BigReal, digits: int) -> str:
    """Scientific notation ``d.ddd...E+XX`` with exactly ``digits`` significant digits."""
    if digits < 1:
        raise PrecisionDomainError("format_scientific", f"digits must be positive, got {digits}")
    if not mpmath.isfinite(value):
        raise PrecisionDomainError("format_scientific", f"cannot format non-finite value {value}")
    if value == 0:
        mantissa = "0." + "0" * (digits - 1) if digits > 1 else "0"
        return f"{mantissa}E+00"
    text = mpmath.nstr(value, digits, strip_zeros=False, min_fixed=0, max_fixed=0,
                       show_zero_exponent=True)
    mantissa, _, exponent = text.partition("e")
    if digits == 1:
        mantissa = mantissa.rstrip(".").split(".")[0]
    return f"{mantissa}E{int(exponent):+03d}"


def matching_digits(value: BigReal, reference: BigReal, cap: int) -> int:
    """Leading significant digits on which ``value`` agrees with ``reference``.

    Measured as ``floor(-log10(|value - reference| / |reference|))`` after
    exponent alignment and clamped to ``[0, cap]``; identical values give ``cap``.
    """
    if value == reference:
        return cap
    if reference == 0:
        return 0
    with mpmath.workdps(cap + 20):
        relative = abs(mpmath.mpf(value) - mpmath.mpf(reference)) / abs(mpmath.mpf(reference))
        if relative == 0:
            return cap
        digits = int(mpmath.floor(-mpmath.log10(relative)))
    return max(0, min(cap, digits))
