"""Record types for benchmark cases and report rows.

Numbers are carried as decimal strings so that cases and reports
round-trip through text, CSV and JSON without losing digits; they are
converted to BigReal only when a case is evaluated.
"""

from dataclasses import asdict, dataclass, field
import json
from typing import List, Optional, Tuple

import mpmath

from precision.context import PrecisionContext
from threecenter.geometry import PolarAxes, ProlateFrame, geometry_from_cartesian
from threecenter.orbital import Orbital

STATUSES = ("match", "partial", "fail")
AXES = tuple(axes.value for axes in PolarAxes)


def _is_decimal(text: str) -> bool:
    try:
        value = mpmath.mpf(text.replace(" ", "").replace("−", "-"))
    except (ValueError, TypeError):
        return False
    return bool(mpmath.isfinite(value))


@dataclass
class BenchCase:
    """One three-center integral to evaluate, with optional reference value.

    Attributes:
        id: Unique case identifier, e.g. ``t2-2p2s-2.1``
        orbital_a: ``(n, l, m, zeta)`` of the orbital on A, as strings
        orbital_b: ``(n, l, m, zeta)`` of the orbital on B
        A, B, C: Cartesian positions in bohr
        l_max: Upper summation limit
        target_digits: Decimal digits requested
        reference_value: Published value (digit groups allowed), or None
        reference_source: Where the reference comes from
        min_digits: Matching digits required for status ``match``
        mantissa_only: Compare mantissas only (published exponent is a typo)
        literature_value: Independent literature cross-check, or None
        literature_source: Where the cross-check comes from
        axes: Polar axes of the orbital harmonics, ``common`` or ``facing``
    """

    id: str
    orbital_a: List[str]
    orbital_b: List[str]
    A: List[str]
    B: List[str]
    C: List[str]
    l_max: int = 30
    target_digits: int = 20
    reference_value: Optional[str] = None
    reference_source: str = ""
    min_digits: int = 18
    mantissa_only: bool = False
    literature_value: Optional[str] = None
    literature_source: str = ""
    axes: str = PolarAxes.COMMON.value

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "BenchCase":
        """Create a BenchCase from a dictionary, stringifying numeric entries."""
        data = dict(data)
        for key in ("orbital_a", "orbital_b", "A", "B", "C"):
            if key in data and data[key] is not None:
                data[key] = [str(v) for v in data[key]]
        for key in ("reference_value", "literature_value"):
            if data.get(key) is not None:
                data[key] = str(data[key])
        return cls(**data)

    def validate(self) -> Tuple[bool, Optional[str]]:
        """Validate field shapes and decimal strings.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if not self.id:
            return False, "id cannot be empty"
        for name in ("orbital_a", "orbital_b"):
            orbital = getattr(self, name)
            if len(orbital) != 4:
                return False, f"{name} needs 4 entries (n l m zeta), got {len(orbital)}"
            if not all(_is_decimal(v) for v in orbital):
                return False, f"{name} entries must be numbers, got {orbital}"
            if not all(mpmath.isint(mpmath.mpf(v)) for v in orbital[1:3]):
                return False, f"{name}: l and m must be integers, got {orbital[1:3]}"
        for name in ("A", "B", "C"):
            point = getattr(self, name)
            if len(point) != 3 or not all(_is_decimal(v) for v in point):
                return False, f"{name} must hold 3 numbers, got {point}"
        if self.l_max < 0:
            return False, f"l_max must be nonnegative, got {self.l_max}"
        if self.target_digits < 1:
            return False, f"target_digits must be positive, got {self.target_digits}"
        if self.min_digits < 1:
            return False, f"min_digits must be positive, got {self.min_digits}"
        if self.axes not in AXES:
            return False, f"axes must be one of {', '.join(AXES)}, got {self.axes!r}"
        for name in ("reference_value", "literature_value"):
            value = getattr(self, name)
            if value is not None and not _is_decimal(value):
                return False, f"{name} must parse as a finite decimal, got {value!r}"
        return True, None

    def orbitals(self, ctx: PrecisionContext) -> Tuple[Orbital, Orbital]:
        """The two orbitals at the working precision of ``ctx``."""
        built = []
        for n, l, m, zeta in (self.orbital_a, self.orbital_b):
            built.append(Orbital.of(n, int(mpmath.mpf(l)), int(mpmath.mpf(m)), zeta, ctx))
        return built[0], built[1]

    def frame(self, ctx: PrecisionContext) -> ProlateFrame:
        return geometry_from_cartesian(self.A, self.B, self.C, ctx)

    @property
    def polar_axes(self) -> PolarAxes:
        return PolarAxes(self.axes)

    @property
    def label(self) -> str:
        return f"{self.orbital_a[0]},{self.orbital_a[1]} | {self.orbital_b[0]},{self.orbital_b[1]}"


@dataclass
class ReportRow:
    """One evaluated case in a report.

    Timing fields (``wall_time``) are informational and excluded from the
    report fingerprint.
    """

    case_id: str
    label: str
    l_max: int
    target_digits: int
    computed: Optional[str]
    reference: Optional[str] = None
    matching_digits: Optional[int] = None
    min_digits: Optional[int] = None
    status: Optional[str] = None
    reference_source: str = ""
    literature: Optional[str] = None
    literature_digits: Optional[int] = None
    truncation_error: Optional[str] = None
    quad_error: Optional[str] = None
    regions: int = 0
    wall_time: float = 0.0
    error: Optional[str] = None
    extra: dict = field(default_factory=dict)

    VALUE_FIELDS = ("case_id", "l_max", "target_digits", "computed", "reference", "matching_digits",
                    "status", "literature_digits", "truncation_error", "quad_error")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "ReportRow":
        return cls(**data)

    def value_fields(self) -> dict:
        """Fields that must be identical between two runs of the same configuration."""
        return {name: getattr(self, name) for name in self.VALUE_FIELDS}

    def validate(self) -> Tuple[bool, Optional[str]]:
        if not self.case_id:
            return False, "case_id cannot be empty"
        if self.status is not None and self.status not in STATUSES:
            return False, f"status must be one of {', '.join(STATUSES)}, got {self.status}"
        if self.computed is not None and not _is_decimal(self.computed):
            return False, f"computed must be a decimal string, got {self.computed!r}"
        return True, None
