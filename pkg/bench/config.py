"""Parser for bench configuration files.

A configuration is a sequence of blocks. ``[case]`` starts a bench case;
``[defaults]`` sets keys that every following case inherits until the next
``[defaults]`` block. Inside a block each line is ``key = value``; ``#``
starts a comment. Example::

    [defaults]
    A = 0 0 0
    B = 0 0 6
    C = 0 0 -7
    lmax = 30
    axes = facing

    [case]
    id = t2-ss-2.0
    orbital_a = 2.0 0 0 2.0
    orbital_b = 2.0 0 0 2.0
    reference = 4.53377 50011 42666 45050 53528E-04

Cases without a ``reference`` key take their reference value, source,
required digits, literature cross-check and axes convention from the embedded
reference data when a row with the same id exists there. ``axes`` is
``common`` (both orbitals quantized along A->B, the default) or ``facing``
(theta_B measured from B toward A, as the published tables are).
"""

from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from bench.reference import ReferenceData
from common.errors import ConfigError
from common.logging_config import setup_logger
from validation.schema import BenchCase

logger = setup_logger(__name__)

CASE_HEADER = "[case]"
DEFAULTS_HEADER = "[defaults]"

# config key -> (BenchCase field, kind)
_SCALAR_KEYS = {
    "id": ("id", "str"),
    "lmax": ("l_max", "int"),
    "digits": ("target_digits", "int"),
    "reference": ("reference_value", "decimal"),
    "reference_source": ("reference_source", "str"),
    "min_digits": ("min_digits", "int"),
    "mantissa_only": ("mantissa_only", "bool"),
    "literature": ("literature_value", "decimal"),
    "literature_source": ("literature_source", "str"),
    "axes": ("axes", "str"),
}
_VECTOR_KEYS = {"orbital_a": 4, "orbital_b": 4, "A": 3, "B": 3, "C": 3}
_ORBITAL_PARTS = ("n", "l", "m", "zeta")
_SPLIT_KEYS = {f"{part}{index}": (f"orbital_{side}", position)
               for index, side in ((1, "a"), (2, "b"))
               for position, part in enumerate(_ORBITAL_PARTS)}
_REQUIRED = ("id", "orbital_a", "orbital_b", "A", "B", "C")
_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}

# values with their line numbers, keyed by BenchCase field
Block = Dict[str, Tuple[object, int]]


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _convert(kind: str, value: str, path: str, line: int):
    if kind == "int":
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"expected an integer, got {value!r}", path, line)
    if kind == "bool":
        lowered = value.lower()
        if lowered in _TRUE:
            return True
        if lowered in _FALSE:
            return False
        raise ConfigError(f"expected true or false, got {value!r}", path, line)
    if kind == "decimal":
        return " ".join(value.split())
    return value


def _assign(block: Block, key: str, value: str, path: str, line: int) -> None:
    if key in _SCALAR_KEYS:
        name, kind = _SCALAR_KEYS[key]
        block[name] = (_convert(kind, value, path, line), line)
    elif key in _VECTOR_KEYS:
        entries = value.split()
        if len(entries) != _VECTOR_KEYS[key]:
            raise ConfigError(f"{key} needs {_VECTOR_KEYS[key]} entries, got {len(entries)}", path, line)
        block[key] = (entries, line)
    elif key in _SPLIT_KEYS:
        name, position = _SPLIT_KEYS[key]
        current = list(block.get(name, ([None] * 4, line))[0])
        current[position] = value
        block[name] = (current, line)
    else:
        raise ConfigError(f"unknown key {key!r}", path, line)


def _build_case(block: Block, defaults: Block, start: int, path: str,
                reference: Optional[ReferenceData]) -> BenchCase:
    merged = dict(defaults)
    merged.update(block)
    for name in _REQUIRED:
        if name not in merged:
            raise ConfigError(f"case is missing {name!r}", path, start)
    for name in ("orbital_a", "orbital_b"):
        entries, line = merged[name]
        if any(entry is None for entry in entries):
            raise ConfigError(f"{name} is incomplete, got {entries}", path, line)
    case = BenchCase.from_dict({name: value for name, (value, _) in merged.items()})
    if reference is not None and case.reference_value is None and case.id in reference.cases:
        known = reference.cases[case.id]
        case = replace(
            case,
            reference_value=known.reference_value,
            reference_source=case.reference_source or known.reference_source,
            min_digits=merged["min_digits"][0] if "min_digits" in merged else known.min_digits,
            mantissa_only=known.mantissa_only,
            literature_value=case.literature_value or known.literature_value,
            literature_source=case.literature_source or known.literature_source,
            axes=merged["axes"][0] if "axes" in merged else known.axes,
        )
    is_valid, error = case.validate()
    if not is_valid:
        raise ConfigError(error, path, start)
    return case


def parse_config_text(text: str, path: str = "<string>",
                      reference: Optional[ReferenceData] = None) -> List[BenchCase]:
    """Parse configuration text into bench cases, in file order.

    Args:
        text: Configuration contents
        path: Name used in error messages
        reference: Embedded reference data used to fill missing references

    Raises:
        ConfigError: With the file name and line of the first problem.
    """
    cases: List[BenchCase] = []
    seen: Dict[str, int] = {}
    defaults: Block = {}
    block: Optional[Block] = None
    section = None
    start = 0

    def close():
        if section == CASE_HEADER and block is not None:
            case = _build_case(block, defaults, start, path, reference)
            if case.id in seen:
                raise ConfigError(f"duplicate case id {case.id!r} (first at line {seen[case.id]})", path, start)
            seen[case.id] = start
            cases.append(case)

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("["):
            close()
            if line not in (CASE_HEADER, DEFAULTS_HEADER):
                raise ConfigError(f"unknown section {line!r}", path, number)
            section, start = line, number
            if section == DEFAULTS_HEADER:
                defaults = {}
                block = defaults
            else:
                block = {}
            continue
        if block is None:
            raise ConfigError("key outside of a [case] or [defaults] block", path, number)
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"expected 'key = value', got {line!r}", path, number)
        key, value = key.strip(), value.strip()
        if not value:
            raise ConfigError(f"empty value for {key!r}", path, number)
        if section == DEFAULTS_HEADER and key == "id":
            raise ConfigError("id cannot be set in [defaults]", path, number)
        _assign(block, key, value, path, number)
    close()
    return cases


def parse_config(path: str, reference: Optional[ReferenceData] = None) -> List[BenchCase]:
    """Read and parse a configuration file.

    Raises:
        ConfigError: If the file is missing or malformed.
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError("configuration file not found", str(path))
    cases = parse_config_text(file_path.read_text(encoding="utf-8"), str(path), reference)
    logger.debug(f"Parsed {len(cases)} cases from {path}")
    return cases
