"""Tests for precision context, gamma-family functions and binomials."""

import math
import random

import mpmath
import pytest

from common.errors import PrecisionDomainError
from precision.binomial import binomial, gen_binomial, integer_value
from precision.context import DIGITS_ENV, PrecisionContext, format_scientific, matching_digits
from precision.gamma import (dirac_gamma, gamma, gamma_stirling, incomplete_gamma_upper, log_gamma,
                             lower_incomplete_gamma_series, upper_incomplete_gamma_cf)

CTX = PrecisionContext(30)


def test_context_defaults_and_working_digits():
    """Test default target, guard and working digits."""
    ctx = PrecisionContext()
    assert ctx.target_digits == 20
    assert ctx.guard_digits == 15
    assert ctx.working_digits == 35


def test_context_rejects_small_guard():
    """Test that fewer than ten guard digits are rejected."""
    with pytest.raises(PrecisionDomainError):
        PrecisionContext(20, 5)
    with pytest.raises(PrecisionDomainError):
        PrecisionContext(0)


def test_context_from_env(monkeypatch):
    """Test that THREECENTER_DIGITS sets the default target."""
    monkeypatch.setenv(DIGITS_ENV, "42")
    assert PrecisionContext.from_env().target_digits == 42
    monkeypatch.setenv(DIGITS_ENV, "many")
    with pytest.raises(PrecisionDomainError):
        PrecisionContext.from_env()
    monkeypatch.delenv(DIGITS_ENV)
    assert PrecisionContext.from_env().target_digits == 20


def test_workdps_restores_precision():
    """Test that workdps raises precision only inside the block."""
    before = mpmath.mp.dps
    with CTX.workdps(5):
        assert mpmath.mp.dps == CTX.working_digits + 5
    assert mpmath.mp.dps == before


def test_real_reads_grouped_and_typographic_strings():
    """Test decimal parsing of grouped digits and unicode minus."""
    value = CTX.real("2.94549 60536 73751E−02")
    with CTX.workdps():
        assert value == mpmath.mpf("2.945496053673751e-2")


def test_real_reads_floats_by_repr():
    """Test that floats mean their shortest decimal repr."""
    with CTX.workdps():
        assert CTX.real(1.24) == mpmath.mpf("1.24")


def test_format_scientific():
    """Test scientific formatting with explicit exponent sign."""
    with CTX.workdps():
        assert format_scientific(mpmath.mpf("2.5"), 3) == "2.50E+00"
        assert format_scientific(mpmath.mpf("-0.000123456"), 4) == "-1.235E-04"
        assert format_scientific(mpmath.mpf(0), 3) == "0.00E+00"
        assert format_scientific(mpmath.mpf("7.3e15"), 1) == "7E+15"


def test_format_scientific_rejects_bad_input():
    """Test formatting errors for nonpositive digits and infinities."""
    with pytest.raises(PrecisionDomainError):
        format_scientific(mpmath.mpf(1), 0)
    with pytest.raises(PrecisionDomainError):
        format_scientific(mpmath.inf, 5)


def test_serialize_round_trip():
    """Test that serialize is lossless at working precision."""
    with CTX.workdps():
        value = mpmath.pi / 7
        assert CTX.real(CTX.serialize(value)) == value


def test_matching_digits():
    """Test agreeing leading digits and the cap."""
    with CTX.workdps():
        assert matching_digits(mpmath.mpf("1.2345"), mpmath.mpf("1.2346"), 10) == 4
        assert matching_digits(mpmath.mpf("5"), mpmath.mpf("5"), 12) == 12
        assert matching_digits(mpmath.mpf("1"), mpmath.mpf("2"), 12) == 0
        assert matching_digits(mpmath.mpf("1e-40"), mpmath.mpf("1.0000000001e-40"), 30) == 10


def test_agree():
    """Test relative agreement at target digits."""
    with CTX.workdps():
        a = mpmath.mpf(1) / 3
        assert CTX.agree(a, a * (1 + mpmath.mpf(10) ** -32))
        assert not CTX.agree(a, a * (1 + mpmath.mpf(10) ** -25))


def test_gamma_trivial_values():
    """Test gamma at integers."""
    assert gamma(1, CTX) == 1
    assert gamma(5, CTX) == 24


def test_gamma_half_integer():
    """Test gamma(2.5) = 3 sqrt(pi) / 4."""
    with CTX.workdps():
        expected = 3 * mpmath.sqrt(mpmath.pi) / 4
    assert CTX.agree(gamma("2.5", CTX), expected)
    assert mpmath.nstr(gamma("2.5", CTX), 16) == "1.329340388179135"


def test_gamma_stirling_matches_gamma():
    """Test the independent Stirling evaluation against gamma."""
    for a in ("0.3", "2.5", "7.25", "41"):
        assert CTX.agree(gamma_stirling(a, CTX), gamma(a, CTX))


def test_gamma_functional_equation():
    """Test gamma(a + 1) = a gamma(a) on seeded random noninteger a."""
    rng = random.Random(11)
    for _ in range(25):
        a = str(round(rng.uniform(0.01, 40), 6))
        if mpmath.isint(mpmath.mpf(a)):
            continue
        with CTX.workdps():
            shifted = CTX.real(a) + 1
            assert CTX.agree(gamma(shifted, CTX), CTX.real(a) * gamma(a, CTX))


def test_log_gamma():
    """Test log_gamma against log of gamma."""
    with CTX.workdps():
        assert CTX.agree(log_gamma("12.5", CTX), mpmath.log(gamma("12.5", CTX)))


def test_gamma_domain_errors():
    """Test that nonpositive arguments are rejected."""
    with pytest.raises(PrecisionDomainError):
        gamma(0, CTX)
    with pytest.raises(PrecisionDomainError):
        gamma(-1.5, CTX)


def test_incomplete_gamma_at_zero():
    """Test Gamma(a, 0) = Gamma(a)."""
    assert incomplete_gamma_upper("3.7", 0, CTX) == gamma("3.7", CTX)


def test_incomplete_gamma_closed_forms():
    """Test Gamma(1, x) = exp(-x) and Gamma(3, 2) = 10 exp(-2)."""
    with CTX.workdps():
        assert CTX.agree(incomplete_gamma_upper(1, "0.75", CTX), mpmath.exp(mpmath.mpf("-0.75")))
        assert CTX.agree(incomplete_gamma_upper(1, 20, CTX), mpmath.exp(-20))
        assert CTX.agree(incomplete_gamma_upper(3, 2, CTX), 10 * mpmath.exp(-2))


def test_incomplete_gamma_recurrence():
    """Test Gamma(a+1, x) = a Gamma(a, x) + x^a exp(-x) across both branches."""
    for a, x in (("2.3", "1.1"), ("2.3", "3.3"), ("5.5", "30")):
        with CTX.workdps():
            a_value, x_value = mpmath.mpf(a), mpmath.mpf(x)
            expected = (a_value * incomplete_gamma_upper(a, x, CTX)
                        + x_value ** a_value * mpmath.exp(-x_value))
            shifted = incomplete_gamma_upper(a_value + 1, x, CTX)
        assert CTX.agree(shifted, expected)


def test_incomplete_gamma_branches_agree_at_seam():
    """Test series and continued fraction agree at x = a + 1."""
    a = mpmath.mpf("3.4")
    x = a + 1
    with CTX.workdps():
        from_series = gamma(a, CTX) - lower_incomplete_gamma_series(a, x, CTX)
    assert CTX.agree(from_series, upper_incomplete_gamma_cf(a, x, CTX), 25)


def test_incomplete_gamma_domain_errors():
    """Test that a <= 0 and x < 0 are rejected."""
    with pytest.raises(PrecisionDomainError):
        incomplete_gamma_upper(0, 1, CTX)
    with pytest.raises(PrecisionDomainError):
        incomplete_gamma_upper(1, -1, CTX)


def test_binomial():
    """Test binomial coefficients for integer and real N."""
    assert binomial(5, 0, CTX) == 1
    assert binomial(4, 2, CTX) == 6
    assert binomial("2.5", 1, CTX) == mpmath.mpf("2.5")
    with CTX.workdps():
        assert CTX.agree(binomial("2.5", 3, CTX), mpmath.mpf("2.5") * mpmath.mpf("1.5") * mpmath.mpf("0.5") / 6)
    with pytest.raises(PrecisionDomainError):
        binomial(3, -1, CTX)


def test_integer_value():
    """Test integral detection."""
    assert integer_value(3) == 3
    assert integer_value(mpmath.mpf(4)) == 4
    assert integer_value("2.5") is None


def test_gen_binomial_trivial():
    """Test F_0(N1, N2) = 1 and F_1(2, 3) = -1."""
    assert gen_binomial("2.3", "1.7", 0, CTX) == 1
    assert gen_binomial(2, 3, 1, CTX) == -1


def test_gen_binomial_matches_polynomial_expansion():
    """Test every F_s(2, 3) against the expansion of (x+a)^2 (x-a)^3."""
    plus = [math.comb(2, k) for k in range(3)]
    minus = [(-1) ** k * math.comb(3, k) for k in range(4)]
    product = [0] * 6
    for i, p in enumerate(plus):
        for j, m in enumerate(minus):
            product[i + j] += p * m
    for s, expected in enumerate(product):
        assert gen_binomial(2, 3, s, CTX) == expected


def test_gen_binomial_noninteger_matches_taylor():
    """Test F_s(N1, N2) as Taylor coefficients of (1+t)^N1 (1-t)^N2."""
    with CTX.workdps():
        n1, n2 = mpmath.mpf("2.5"), mpmath.mpf("1.5")
        coefficients = mpmath.taylor(lambda t: (1 + t) ** n1 * (1 - t) ** n2, 0, 4)
    for s, expected in enumerate(coefficients):
        value = gen_binomial(n1, n2, s, CTX)
        assert abs(value - expected) < mpmath.mpf(10) ** -25


def test_dirac_gamma():
    """Test relativistic exponents."""
    assert dirac_gamma(-1, 0, "137.0359895", CTX) == 1
    with CTX.workdps():
        c = mpmath.mpf("137.0359895")
        assert CTX.agree(dirac_gamma(1, 1, c, CTX), mpmath.sqrt(1 - 1 / c ** 2))
        assert CTX.agree(dirac_gamma(2, 1, c, CTX), mpmath.sqrt(4 - 1 / c ** 2))
    assert mpmath.nstr(dirac_gamma(1, 1, "137.0359895", CTX), 8) == "0.99997337"
    assert mpmath.nstr(dirac_gamma(2, 1, "137.0359895", CTX), 9) == "1.99998669"


def test_dirac_gamma_domain_errors():
    """Test kappa = 0 and supercritical charges are rejected."""
    with pytest.raises(PrecisionDomainError):
        dirac_gamma(0, 1, 137, CTX)
    with pytest.raises(PrecisionDomainError):
        dirac_gamma(1, 200, 137, CTX)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
