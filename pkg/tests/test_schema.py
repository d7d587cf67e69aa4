"""Tests for bench case and report row records."""

import json

import pytest

from precision.context import PrecisionContext
from threecenter.geometry import PolarAxes
from validation.schema import BenchCase, ReportRow


def _case(**overrides) -> BenchCase:
    data = {
        "id": "t2-ps-2.1",
        "orbital_a": ["2.1", 1, 0, "2.0"],
        "orbital_b": ["2.1", 0, 0, "2.0"],
        "A": [0, 0, 0],
        "B": [0, 0, 6],
        "C": [0, 0, -7],
        "reference_value": "7.90609 20760 42277 16143 10272E-04",
    }
    data.update(overrides)
    return BenchCase.from_dict(data)


def test_create_valid_case():
    """Test creating a valid BenchCase."""
    case = _case()
    is_valid, error = case.validate()
    assert is_valid is True
    assert error is None


def test_from_dict_stringifies_numbers():
    """Test that numeric entries become decimal strings."""
    case = _case(reference_value=1.5e-3)
    assert case.orbital_a == ["2.1", "1", "0", "2.0"]
    assert case.B == ["0", "0", "6"]
    assert case.reference_value == "0.0015"


def test_case_to_dict_and_json():
    """Test converting a case to a dictionary and a JSON string."""
    case = _case()
    data = case.to_dict()
    assert data["id"] == "t2-ps-2.1"
    assert data["l_max"] == 30
    assert data["mantissa_only"] is False
    parsed = json.loads(case.to_json())
    assert parsed == data
    assert BenchCase.from_dict(parsed) == case


def test_case_label():
    """Test the short orbital label."""
    assert _case().label == "2.1,1 | 2.1,0"


def test_case_builds_orbitals_and_frame():
    """Test conversion to orbitals and the prolate frame."""
    ctx = PrecisionContext(20)
    a, b = _case().orbitals(ctx)
    assert (a.l, a.m, b.l, b.m) == (1, 0, 0, 0)
    frame = _case().frame(ctx)
    assert frame.R_AB == 6
    assert ctx.agree(frame.xi_c, ctx.real(20) / 6)
    assert _case().polar_axes is PolarAxes.COMMON
    assert _case(axes="facing").polar_axes is PolarAxes.FACING


@pytest.mark.parametrize("overrides, message", [
    ({"id": ""}, "id cannot be empty"),
    ({"orbital_a": ["2", 1, 0]}, "needs 4 entries"),
    ({"orbital_b": ["2", "x", 0, "1"]}, "must be numbers"),
    ({"orbital_a": ["2", "1.5", 0, "1"]}, "must be integers"),
    ({"C": [0, 0]}, "must hold 3 numbers"),
    ({"l_max": -1}, "l_max"),
    ({"target_digits": 0}, "target_digits"),
    ({"min_digits": 0}, "min_digits"),
    ({"reference_value": "not a number"}, "reference_value"),
    ({"literature_value": "inf"}, "literature_value"),
    ({"axes": "lab"}, "axes must be one of common, facing"),
])
def test_case_validation_errors(overrides, message):
    """Test that malformed cases are rejected with a useful message."""
    is_valid, error = _case(**overrides).validate()
    assert is_valid is False
    assert message in error


def test_grouped_reference_is_valid():
    """Test that digit-grouped references with a typographic minus validate."""
    is_valid, _ = _case(reference_value="4.53377 50011 42666E−04").validate()
    assert is_valid is True


def _row(**overrides) -> ReportRow:
    data = {
        "case_id": "t2-ss-2.0",
        "label": "2.0,0 | 2.0,0",
        "l_max": 30,
        "target_digits": 25,
        "computed": "4.533775001142666450505353E-04",
        "reference": "4.53377 50011 42666 45050 53528E-04",
        "matching_digits": 25,
        "min_digits": 18,
        "status": "match",
        "regions": 12,
        "wall_time": 3.5,
    }
    data.update(overrides)
    return ReportRow(**data)


def test_row_validation():
    """Test report row validation."""
    assert _row().validate() == (True, None)
    assert _row(case_id="").validate()[0] is False
    is_valid, error = _row(status="close").validate()
    assert is_valid is False
    assert "status" in error
    assert _row(computed="n/a").validate()[0] is False
    assert _row(computed=None, error="ConvergenceError: budget").validate()[0] is True


def test_row_round_trip_through_json():
    """Test that a row survives to_json and from_dict."""
    row = _row(extra={"evaluations": 2250})
    assert ReportRow.from_dict(json.loads(row.to_json())) == row


def test_value_fields_exclude_timing():
    """Test that wall time and regions do not enter the value fields."""
    fields = _row().value_fields()
    assert "wall_time" not in fields
    assert "regions" not in fields
    assert _row(wall_time=1.0).value_fields() == _row(wall_time=99.0).value_fields()
    assert _row(computed="4.5E-04").value_fields() != _row().value_fields()


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
