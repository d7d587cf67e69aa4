"""Summary statistics for benchmark runs.

Counts cases by comparison status and accumulates quadrature effort so
runs at different precisions or rule orders can be compared.
"""

from dataclasses import dataclass, asdict
from datetime import datetime, timezone
import json


def _now() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


@dataclass
class RunMetrics:
    """Statistics for a bench run.

    Attributes:
        cases: Cases evaluated
        matches: Cases reaching their required digits
        partials: Cases within two digits of the requirement
        failures: Cases below that
        errors: Cases that raised a numerical error
        unchecked: Cases without reference data
        integrals: Three-center evaluations performed
        regions: Adaptive regions used across all evaluations
        evaluations: Integrand evaluations across all evaluations
        start_time: ISO 8601 start timestamp
        end_time: ISO 8601 end timestamp (empty until finished)
    """

    cases: int = 0
    matches: int = 0
    partials: int = 0
    failures: int = 0
    errors: int = 0
    unchecked: int = 0
    integrals: int = 0
    regions: int = 0
    evaluations: int = 0
    start_time: str = ""
    end_time: str = ""

    def __post_init__(self):
        if not self.start_time:
            self.start_time = _now()

    def increment(self, metric: str, count: int = 1):
        """Increment a metric counter."""
        if hasattr(self, metric):
            setattr(self, metric, getattr(self, metric) + count)

    def record_status(self, status: str):
        """Count one case by its comparison status (None for no reference)."""
        self.cases += 1
        name = {"match": "matches", "partial": "partials", "fail": "failures"}.get(status, "unchecked")
        self.increment(name)

    def finish(self):
        """Mark the run as finished with end timestamp."""
        self.end_time = _now()

    def match_rate(self) -> float:
        """Percentage of checked cases that matched."""
        checked = self.matches + self.partials + self.failures
        if checked == 0:
            return 0.0
        return self.matches / checked * 100

    def all_matched(self) -> bool:
        return self.partials == 0 and self.failures == 0 and self.errors == 0

    def duration_seconds(self) -> float:
        """Run duration in seconds."""
        if not self.end_time:
            return 0.0
        start = datetime.fromisoformat(self.start_time.replace("Z", "+00:00"))
        end = datetime.fromisoformat(self.end_time.replace("Z", "+00:00"))
        return (end - start).total_seconds()

    def summary(self) -> str:
        """Generate human-readable summary."""
        return f"""
Bench Run Summary
=================
Cases evaluated:         {self.cases}
Matched:                 {self.matches}
Partial:                 {self.partials}
Failed:                  {self.failures}
Numerical errors:        {self.errors}
Without reference:       {self.unchecked}
Match rate:              {self.match_rate():.1f}%
Integrals evaluated:     {self.integrals}
Quadrature regions:      {self.regions}
Integrand evaluations:   {self.evaluations}
Duration:                {self.duration_seconds():.1f}s
""".strip()

    def to_dict(self) -> dict:
        """Convert to dictionary."""
        return asdict(self)

    def to_json(self) -> str:
        """Serialize to JSON."""
        return json.dumps(self.to_dict(), indent=2)
