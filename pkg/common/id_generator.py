"""Content-hash identifiers for reports.

Two runs of the same configuration at the same precision must produce
identical value fields; hashing those fields gives a short fingerprint
that can be compared across runs and machines.
"""

import hashlib
import json
from typing import Iterable


def generate_id(content: str, prefix: str = "") -> str:
    """Short SHA-256 content hash, optionally prefixed.

    Args:
        content: Text to hash
        prefix: Optional prefix (e.g. a config name)

    Returns:
        ID string in format "{prefix}-{hash}" or just "{hash}"
    """
    content_hash = hashlib.sha256(content.encode("utf-8")).hexdigest()
    short_hash = content_hash[:16]
    if prefix:
        return f"{prefix}-{short_hash}"
    return short_hash


def report_fingerprint(value_records: Iterable[dict], prefix: str = "") -> str:
    """Fingerprint of a report from the value fields of its rows, in order."""
    canonical = "\n".join(json.dumps(record, sort_keys=True, ensure_ascii=False) for record in value_records)
    return generate_id(canonical, prefix)
