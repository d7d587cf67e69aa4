"""Tests for reference comparison and digit grouping."""

import mpmath
import pytest

from precision.context import PrecisionContext
from validation.comparison import compare, format_grouped, group_digits, parse_decimal, significant_digits

CTX = PrecisionContext(30)
PUBLISHED = "2.94549 60536 73751 14101 41604E-02"


def test_parse_decimal_grouped():
    """Test reading a digit-grouped published value."""
    with CTX.workdps():
        assert parse_decimal(f"  {PUBLISHED} ", CTX) == mpmath.mpf("2.9454960536737511410141604e-2")


def test_significant_digits():
    """Test counting printed significant digits."""
    assert significant_digits(PUBLISHED) == 26
    assert significant_digits("1.606646078E-01") == 10
    assert significant_digits("-0.00123") == 3
    assert significant_digits("4.5") == 2


def test_compare_match():
    """Test an exact match is capped at the printed digits."""
    value = CTX.real(PUBLISHED)
    report = compare("t1", value, PUBLISHED, 20, CTX)
    assert report.status == "match"
    assert report.matching_digits == 26
    assert report.min_digits == 20
    assert report.reference == PUBLISHED


def test_compare_partial_and_fail():
    """Test partial within two digits and fail beyond."""
    with CTX.workdps():
        reference = CTX.real(PUBLISHED)
        close = reference * (1 + mpmath.mpf("3e-19"))
        far = reference * (1 + mpmath.mpf("3e-12"))
    partial = compare("t1", close, PUBLISHED, 20, CTX)
    assert partial.matching_digits == 18
    assert partial.status == "partial"
    failed = compare("t1", far, PUBLISHED, 20, CTX)
    assert failed.matching_digits == 11
    assert failed.status == "fail"


def test_compare_requirement_capped_by_reference():
    """Test that a short reference lowers the requirement to its printed digits."""
    report = compare("lit", CTX.real("2.945496054E-02"), "2.945496054E-02", 20, CTX)
    assert report.min_digits == 10
    assert report.matching_digits == 10
    assert report.status == "match"


def test_compare_mantissa_only():
    """Test that mantissa comparison ignores a wrong published exponent."""
    value = CTX.real("9.69666 68121 64802 10682 05157E-03")
    published = "9.69666 68121 64802 10682 05157E-04"
    assert compare("t2", value, published, 18, CTX).status == "fail"
    report = compare("t2", value, published, 18, CTX, mantissa_only=True)
    assert report.status == "match"
    assert report.matching_digits == 26


def test_comparison_report_to_dict():
    """Test dictionary conversion of a comparison report."""
    data = compare("t1", CTX.real(PUBLISHED), PUBLISHED, 20, CTX).to_dict()
    assert data["case_id"] == "t1"
    assert data["status"] == "match"
    assert data["computed"].endswith("E-02")


def test_group_digits():
    """Test five-digit grouping of scientific strings."""
    assert group_digits("2.9454960536737511410141604E-02") == PUBLISHED
    assert group_digits("-1.2345E+00") == "-1.2345E+00"
    assert group_digits("-1.234567E+10") == "-1.23456 7E+10"
    assert group_digits("7E+15") == "7E+15"
    assert group_digits("not a number") == "not a number"


def test_format_grouped():
    """Test grouped formatting of a BigReal."""
    with CTX.workdps():
        value = mpmath.mpf(1) / 3
    assert format_grouped(value, 11) == "3.33333 33333E-01"


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
