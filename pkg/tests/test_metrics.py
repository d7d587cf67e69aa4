"""Tests for run metrics and report fingerprints."""

import json

import pytest

from common.id_generator import generate_id, report_fingerprint
from common.metrics import RunMetrics


def test_record_status_counts():
    """Test counting cases by comparison status."""
    metrics = RunMetrics()
    for status in ("match", "match", "partial", "fail", None):
        metrics.record_status(status)
    assert metrics.cases == 5
    assert (metrics.matches, metrics.partials, metrics.failures, metrics.unchecked) == (2, 1, 1, 1)
    assert metrics.match_rate() == 50.0
    assert not metrics.all_matched()


def test_increment_ignores_unknown_metric():
    """Test that unknown counters are ignored."""
    metrics = RunMetrics()
    metrics.increment("regions", 40)
    metrics.increment("no_such_counter")
    assert metrics.regions == 40


def test_empty_run():
    """Test an empty run has no match rate and counts as all matched."""
    metrics = RunMetrics()
    assert metrics.match_rate() == 0.0
    assert metrics.all_matched()
    assert metrics.duration_seconds() == 0.0


def test_finish_and_duration():
    """Test duration between fixed timestamps."""
    metrics = RunMetrics(start_time="2026-01-01T00:00:00Z")
    metrics.end_time = "2026-01-01T00:01:30Z"
    assert metrics.duration_seconds() == 90.0
    fresh = RunMetrics()
    fresh.finish()
    assert fresh.end_time.endswith("Z")
    assert fresh.duration_seconds() >= 0.0


def test_summary_and_json():
    """Test the human-readable summary and JSON form."""
    metrics = RunMetrics()
    metrics.record_status("match")
    metrics.increment("integrals")
    text = metrics.summary()
    assert text.startswith("Bench Run Summary")
    assert "Matched:                 1" in text
    assert "Match rate:              100.0%" in text
    assert json.loads(metrics.to_json())["matches"] == 1


def test_generate_id():
    """Test short content hashes with and without prefix."""
    plain = generate_id("content")
    assert len(plain) == 16
    assert generate_id("content") == plain
    assert generate_id("other") != plain
    assert generate_id("content", "threecenter1") == f"threecenter1-{plain}"


def test_report_fingerprint_depends_on_values_and_order():
    """Test that fingerprints change with values and row order but not key order."""
    rows = [{"case_id": "a", "computed": "1.0E+00"}, {"case_id": "b", "computed": "2.0E+00"}]
    fingerprint = report_fingerprint(rows, "run")
    assert fingerprint.startswith("run-")
    assert report_fingerprint([{"computed": "1.0E+00", "case_id": "a"}, rows[1]], "run") == fingerprint
    assert report_fingerprint(list(reversed(rows)), "run") != fingerprint
    assert report_fingerprint([rows[0], {"case_id": "b", "computed": "2.1E+00"}], "run") != fingerprint


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
