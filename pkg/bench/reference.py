"""Embedded reference data: published table rows, convergence rows and magnitude references."""

from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional

import yaml

from common.errors import ConfigError
from common.logging_config import setup_logger
from validation.schema import BenchCase

logger = setup_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"
DEFAULT_REFERENCE_PATH = DATA_DIR / "reference.yaml"

_TABLE_DEFAULTS = ("A", "B", "C", "l_max", "target_digits", "min_digits", "axes")


@dataclass
class ConvergenceReference:
    """Published partial sums of one case, keyed by summation limit."""

    case_id: str
    min_digits: int
    rows: Dict[int, str]


@dataclass
class AuxReference:
    """Auxiliary-function row published without its xi_C; magnitudes only."""

    L: int
    Lambda: int
    q: int
    N1: str
    N2: str
    p1: str
    p2: str
    J: str
    K: str


@dataclass
class StressReference:
    """Large-magnitude general auxiliary row (small p1, p2)."""

    L: int
    M: int
    orbital_a: List[str]
    orbital_b: List[str]
    p1: str
    p2: str
    J_magnitude: str
    K_magnitude: str


@dataclass
class ReferenceData:
    """Everything in ``reference.yaml``.

    Attributes:
        cases: Bench cases by id, with reference values filled in
        tables: Case ids of each table, in published order
        captions: Table captions
        convergence: Convergence rows by case id
        auxiliary: Magnitude-only auxiliary rows
        stress: Large-magnitude auxiliary row, if present
    """

    cases: Dict[str, BenchCase] = field(default_factory=dict)
    tables: Dict[str, List[str]] = field(default_factory=dict)
    captions: Dict[str, str] = field(default_factory=dict)
    convergence: Dict[str, ConvergenceReference] = field(default_factory=dict)
    auxiliary: List[AuxReference] = field(default_factory=list)
    stress: Optional[StressReference] = None

    def table_cases(self, name: str) -> List[BenchCase]:
        """Cases of table ``name`` in published order.

        Raises:
            KeyError: For an unknown table.
        """
        return [self.cases[case_id] for case_id in self.tables[name]]


def _case_from_row(table: str, settings: dict, row: dict) -> BenchCase:
    data = {key: settings[key] for key in _TABLE_DEFAULTS if key in settings}
    data.update({
        "id": row["id"],
        "orbital_a": row["orbital_a"],
        "orbital_b": row["orbital_b"],
        "reference_value": row["value"],
        "reference_source": f"{table}: {settings.get('caption', '')}".rstrip(": "),
        "mantissa_only": bool(row.get("mantissa_only", False)),
    })
    for key in ("min_digits", "l_max", "target_digits"):
        if key in row:
            data[key] = row[key]
    if "literature" in row:
        data["literature_value"] = row["literature"]
        data["literature_source"] = row.get("literature_source", "")
    return BenchCase.from_dict(data)


def parse_reference(raw: dict, path: str = "<reference>") -> ReferenceData:
    """Build :class:`ReferenceData` from the loaded YAML mapping.

    Raises:
        ConfigError: For missing keys or rows that do not validate.
    """
    data = ReferenceData()
    try:
        for table, settings in (raw.get("tables") or {}).items():
            data.captions[table] = settings.get("caption", "")
            data.tables[table] = []
            for row in settings.get("rows") or []:
                case = _case_from_row(table, settings, row)
                is_valid, error = case.validate()
                if not is_valid:
                    raise ConfigError(f"{table}/{case.id}: {error}", path)
                if case.id in data.cases:
                    raise ConfigError(f"duplicate reference id {case.id!r}", path)
                data.cases[case.id] = case
                data.tables[table].append(case.id)
        for case_id, entry in (raw.get("convergence") or {}).items():
            rows = {int(limit): str(value) for limit, value in entry["rows"].items()}
            data.convergence[case_id] = ConvergenceReference(case_id, int(entry.get("min_digits", 20)), rows)
        nonreproducible = raw.get("nonreproducible") or {}
        for row in nonreproducible.get("auxiliary") or []:
            data.auxiliary.append(AuxReference(**{key: (str(value) if isinstance(value, (str, float)) else value)
                                                  for key, value in row.items()}))
        if nonreproducible.get("stress"):
            stress = dict(nonreproducible["stress"])
            stress["orbital_a"] = [str(v) for v in stress["orbital_a"]]
            stress["orbital_b"] = [str(v) for v in stress["orbital_b"]]
            data.stress = StressReference(**stress)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed reference data: {e}", path)
    return data


@lru_cache(maxsize=8)
def _load_cached(path: str) -> ReferenceData:
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError("reference data not found", path)
    except yaml.YAMLError as e:
        raise ConfigError(f"invalid YAML: {e}", path)
    if not isinstance(raw, dict):
        raise ConfigError("reference data must be a mapping", path)
    data = parse_reference(raw, path)
    logger.debug(f"Loaded {len(data.cases)} reference cases from {path}")
    return data


def load_reference(path: Optional[str] = None) -> ReferenceData:
    """Load reference data, the bundled ``reference.yaml`` by default.

    The result is cached per path and shared; treat it as read-only.
    """
    return _load_cached(str(path or DEFAULT_REFERENCE_PATH))
