"""Comparison of computed values against published reference values."""

from dataclasses import asdict, dataclass
import re

import mpmath

from precision.context import PrecisionContext, matching_digits

# a case this many digits short of its requirement is reported as partial
PARTIAL_SLACK = 2
GROUP_SIZE = 5

_SCIENTIFIC = re.compile(r"^([+-]?)(\d)\.?(\d*)[eE]([+-]?\d+)$")


@dataclass
class ComparisonReport:
    """Agreement between one computed value and its reference.

    Attributes:
        case_id: Bench case identifier
        computed: Computed value, ungrouped scientific notation
        reference: Reference value as published (normalized spacing)
        matching_digits: Leading significant digits in agreement
        min_digits: Digits required for ``match``
        status: ``match``, ``partial`` (within two digits) or ``fail``
    """

    case_id: str
    computed: str
    reference: str
    matching_digits: int
    min_digits: int
    status: str

    def to_dict(self) -> dict:
        return asdict(self)


def parse_decimal(text: str, ctx: PrecisionContext) -> mpmath.mpf:
    """Read a decimal string in plain, scientific or digit-grouped form."""
    return ctx.real(text.strip())


def _mantissa(value: mpmath.mpf) -> mpmath.mpf:
    if value == 0:
        return value
    exponent = int(mpmath.floor(mpmath.log10(abs(value))))
    return value / mpmath.mpf(10) ** exponent


def significant_digits(text: str) -> int:
    """Number of significant digits written in a decimal string."""
    cleaned = text.replace(" ", "").replace("−", "-").lstrip("+-")
    mantissa = re.split(r"[eE]", cleaned)[0].replace(".", "").lstrip("0")
    return len(mantissa)


def compare(case_id: str, computed: mpmath.mpf, reference: str, min_digits: int,
            ctx: PrecisionContext, mantissa_only: bool = False) -> ComparisonReport:
    """Compare ``computed`` with the published ``reference``.

    The number of matching digits is capped by the digits the reference
    prints. With ``mantissa_only`` the decimal exponents are ignored.
    """
    cap = significant_digits(reference)
    with ctx.workdps():
        expected = parse_decimal(reference, ctx)
        value = mpmath.mpf(computed)
        if mantissa_only:
            expected, value = _mantissa(expected), _mantissa(value)
        digits = matching_digits(value, expected, cap)
    required = min(min_digits, cap)
    if digits >= required:
        status = "match"
    elif digits >= required - PARTIAL_SLACK:
        status = "partial"
    else:
        status = "fail"
    return ComparisonReport(case_id, ctx.to_decimal(computed), " ".join(reference.split()), digits,
                            required, status)


def format_grouped(value: mpmath.mpf, digits: int, group: int = GROUP_SIZE) -> str:
    """Scientific notation with the fraction in groups of five: ``2.94549 60536 ...E-02``."""
    with mpmath.workdps(digits + 10):
        text = PrecisionContext(digits, 10).to_decimal(value, digits)
    return group_digits(text, group)


def group_digits(text: str, group: int = GROUP_SIZE) -> str:
    """Insert spaces into an ungrouped scientific string after every ``group`` fraction digits."""
    match = _SCIENTIFIC.match(text.replace(" ", ""))
    if match is None:
        return text
    sign, lead, fraction, exponent = match.groups()
    first = lead + "." + fraction[:group] if fraction else lead
    rest = [fraction[i:i + group] for i in range(group, len(fraction), group)]
    return " ".join([sign + first] + rest) + f"E{int(exponent):+03d}"
