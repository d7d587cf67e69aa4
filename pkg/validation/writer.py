"""Report writers: grouped text table, CSV and JSONL."""

import csv
from pathlib import Path
from typing import Iterable, List

from validation.comparison import group_digits
from validation.schema import ReportRow

CSV_FIELDS = ("case_id", "label", "l_max", "target_digits", "computed", "reference", "matching_digits",
              "min_digits", "status", "literature", "literature_digits", "truncation_error", "quad_error",
              "regions", "wall_time", "error")

_INT_FIELDS = ("l_max", "target_digits", "matching_digits", "min_digits", "literature_digits", "regions")


class JSONLWriter:
    """Append-only JSONL report writer, one validated row per line.

    Attributes:
        output_path: Path to the JSONL file
    """

    def __init__(self, output_path: str):
        self.output_path = Path(output_path)
        self.output_path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, row: ReportRow) -> None:
        """Append ``row``.

        Raises:
            ValueError: If the row does not validate.
        """
        is_valid, error = row.validate()
        if not is_valid:
            raise ValueError(f"Invalid report row: {error}")
        with open(self.output_path, "a", encoding="utf-8") as f:
            f.write(row.to_json() + "\n")


def write_csv(rows: Iterable[ReportRow], path: str) -> Path:
    """Write rows with ungrouped decimal strings, one case per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            data = row.to_dict()
            writer.writerow({name: "" if data[name] is None else data[name] for name in CSV_FIELDS})
    return path


def read_csv(path: str) -> List[ReportRow]:
    """Read rows written by :func:`write_csv`; decimal strings come back unchanged."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for record in csv.DictReader(f):
            data = {name: (record[name] if record[name] != "" else None) for name in CSV_FIELDS}
            for name in _INT_FIELDS:
                if data[name] is not None:
                    data[name] = int(data[name])
            data["regions"] = data["regions"] or 0
            data["wall_time"] = float(data["wall_time"]) if data["wall_time"] is not None else 0.0
            data["label"] = data["label"] or ""
            rows.append(ReportRow(**data))
    return rows


def render_text(rows: Iterable[ReportRow], title: str = "") -> str:
    """Fixed-width table with 5-digit grouped values, one case per line."""
    lines = []
    if title:
        lines += [title, "=" * len(title)]
    header = f"{'case':<22} {'orbitals':<16} {'Lmax':>4}  {'computed':<40} {'digits':>6}  status"
    lines += [header, "-" * len(header)]
    for row in rows:
        computed = group_digits(row.computed) if row.computed else f"ERROR: {row.error}"
        digits = "" if row.matching_digits is None else str(row.matching_digits)
        status = row.status or "-"
        lines.append(f"{row.case_id:<22} {row.label:<16} {row.l_max:>4}  {computed:<40} {digits:>6}  {status}")
        if row.reference:
            lines.append(f"{'':<22} {'reference':<16} {'':>4}  {group_digits(row.reference):<40}"
                         f"{'':>7}  {row.reference_source}")
        if row.literature:
            lit_digits = "" if row.literature_digits is None else str(row.literature_digits)
            lines.append(f"{'':<22} {'literature':<16} {'':>4}  {row.literature:<40} {lit_digits:>6}")
    return "\n".join(lines) + "\n"


def write_text(rows: Iterable[ReportRow], path: str, title: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_text(list(rows), title), encoding="utf-8")
    return path


def write_jsonl(rows: Iterable[ReportRow], path: str) -> Path:
    """Replace ``path`` with one JSON line per row."""
    writer = JSONLWriter(path)
    path = writer.output_path
    path.write_text("", encoding="utf-8")
    for row in rows:
        writer.append(row)
    return path


def render_convergence(rows: Iterable[ReportRow], title: str = "") -> str:
    """Partial sums by summation limit, ``[L]`` style, with digits shared with the previous limit."""
    lines = []
    if title:
        lines += [title, "=" * len(title)]
    header = f"{'[Lmax]':<8} {'value':<40} {'prev':>5} {'ref':>5}  status"
    lines += [header, "-" * len(header)]
    for row in rows:
        value = group_digits(row.computed) if row.computed else f"ERROR: {row.error}"
        previous = row.extra.get("previous_digits")
        previous = "" if previous is None else str(previous)
        reference = "" if row.matching_digits is None else str(row.matching_digits)
        lines.append(f"{'[' + str(row.l_max) + ']':<8} {value:<40} {previous:>5} {reference:>5}  "
                     f"{row.status or '-'}")
    return "\n".join(lines) + "\n"
