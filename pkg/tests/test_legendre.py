"""Tests for associated Legendre functions of both kinds."""

import random

import mpmath
import pytest

from common.errors import PrecisionDomainError
from precision.context import PrecisionContext
from special.legendre import (LegendreStrategy, clear_cache, explicit_coefficient_bound, get_cache_stats,
                              legendre_p, legendre_q, normalized_legendre)

CTX = PrecisionContext(30)
STRATEGIES = list(LegendreStrategy)


def test_legendre_p_outside_unit_interval():
    """Test P_2^1(1.5) = 3 x sqrt(x^2 - 1)."""
    with CTX.workdps():
        expected = 3 * mpmath.mpf("1.5") * mpmath.sqrt(mpmath.mpf("1.25"))
    assert CTX.agree(legendre_p(2, 1, "1.5", CTX), expected)


def test_legendre_p_has_no_condon_shortley_phase():
    """Test P_1^1(x) = +sqrt(1 - x^2) inside the unit interval."""
    with CTX.workdps():
        expected = mpmath.sqrt(1 - mpmath.mpf("0.36"))
    assert CTX.agree(legendre_p(1, 1, "0.6", CTX), expected)


def test_legendre_p_matches_plain_legendre_polynomial():
    """Test P_L^0 against mpmath's Legendre polynomials."""
    for L in (0, 3, 10, 17):
        with CTX.workdps():
            expected = mpmath.legendre(L, mpmath.mpf("2.25"))
        assert CTX.agree(legendre_p(L, 0, "2.25", CTX), expected)


def test_legendre_q_closed_forms():
    """Test Q_0(2) = ln(3)/2, Q_1(2) = ln(3) - 1 and Q_1^1(2)."""
    with CTX.workdps():
        log3 = mpmath.log(3)
        q11 = mpmath.sqrt(3) * (log3 / 2 - mpmath.mpf(2) / 3)
        assert CTX.agree(legendre_q(0, 0, 2, CTX), log3 / 2)
        assert CTX.agree(legendre_q(1, 0, 2, CTX), log3 - 1)
        assert CTX.agree(legendre_q(0, 1, 2, CTX), -1 / mpmath.sqrt(3))
        assert CTX.agree(legendre_q(1, 1, 2, CTX), q11)


def test_legendre_q_high_degree_against_mpmath():
    """Test the recurrence for Q_20(1.5) where upward recurrence loses digits."""
    with CTX.workdps():
        expected = mpmath.re(mpmath.legenq(20, 0, mpmath.mpf("1.5"), type=3))
    assert CTX.agree(legendre_q(20, 0, "1.5", CTX), expected)


def test_legendre_q_decreasing_in_xi():
    """Test that Q_L decreases on (1, inf)."""
    values = [legendre_q(3, 0, xi, CTX) for xi in ("1.1", "1.5", "2", "5", "20")]
    assert all(a > b > 0 for a, b in zip(values, values[1:]))


def test_legendre_q_rejects_cut():
    """Test that xi <= 1 is rejected."""
    with pytest.raises(PrecisionDomainError):
        legendre_q(0, 0, 1, CTX)
    with pytest.raises(PrecisionDomainError):
        legendre_q(2, 0, "0.5", CTX)


def test_normalized_low_orders():
    """Test Pbar_00 = 1/sqrt(2) and Pbar_10 = sqrt(3/2) x."""
    with CTX.workdps():
        for strategy in STRATEGIES:
            assert CTX.agree(normalized_legendre(0, 0, "0.3", strategy, CTX), 1 / mpmath.sqrt(2))
            assert CTX.agree(normalized_legendre(1, 0, "0.3", strategy, CTX),
                             mpmath.sqrt(mpmath.mpf(3) / 2) * mpmath.mpf("0.3"))


def test_strategies_agree():
    """Test explicit, recurrence and native strategies on seeded random points."""
    rng = random.Random(7)
    for _ in range(20):
        l = rng.randint(0, 14)
        lam = rng.randint(0, l)
        x = str(round(rng.uniform(-0.99, 0.99), 6))
        reference = normalized_legendre(l, lam, x, LegendreStrategy.RECURRENCE, CTX)
        for strategy in (LegendreStrategy.EXPLICIT, LegendreStrategy.NATIVE):
            value = normalized_legendre(l, lam, x, strategy, CTX)
            assert abs(value - reference) < mpmath.mpf(10) ** -25


def test_normalized_orthonormality():
    """Test int Pbar_l1 Pbar_l2 over [-1, 1] for a common order."""
    with CTX.workdps():
        for l1 in range(1, 5):
            for l2 in range(1, 5):
                overlap = mpmath.quad(
                    lambda x: normalized_legendre(l1, 1, x, LegendreStrategy.RECURRENCE, CTX)
                    * normalized_legendre(l2, 1, x, LegendreStrategy.RECURRENCE, CTX),
                    [-1, 1],
                )
                assert abs(overlap - (1 if l1 == l2 else 0)) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_normalized_parity(strategy):
    """Test Pbar_{l lambda}(-x) = (-1)^(l - lambda) Pbar_{l lambda}(x)."""
    rng = random.Random(13)
    for _ in range(15):
        l = rng.randint(0, 12)
        lam = rng.randint(0, l)
        x = round(rng.uniform(0.01, 0.99), 6)
        value = normalized_legendre(l, lam, str(x), strategy, CTX)
        mirrored = normalized_legendre(l, lam, str(-x), strategy, CTX)
        assert abs(mirrored - (-1) ** (l - lam) * value) < mpmath.mpf(10) ** -25


def test_wronskian_of_both_kinds():
    """Test P_L Q_L' - P_L' Q_L = 1/(1 - xi^2), with derivatives from the order-one functions."""
    for xi in ("1.25", "2", "4.5"):
        with CTX.workdps():
            x = CTX.real(xi)
            root = mpmath.sqrt(x * x - 1)
            expected = 1 / (1 - x * x)
            for L in (0, 1, 4, 9, 16):
                wronskian = (legendre_p(L, 0, x, CTX) * legendre_q(L, 1, x, CTX)
                             - legendre_p(L, 1, x, CTX) * legendre_q(L, 0, x, CTX)) / root
                assert CTX.agree(wronskian, expected, 25), (xi, L)


def test_cross_degree_wronskian():
    """Test L (P_{L-1} Q_L - P_L Q_{L-1}) = -1 on (1, inf)."""
    for xi in ("1.1", "3"):
        with CTX.workdps():
            for L in range(1, 25):
                value = L * (legendre_p(L - 1, 0, xi, CTX) * legendre_q(L, 0, xi, CTX)
                             - legendre_p(L, 0, xi, CTX) * legendre_q(L - 1, 0, xi, CTX))
                assert CTX.agree(value, -1, 25), (xi, L)


def test_normalized_domain_errors():
    """Test order above degree and arguments outside [-1, 1]."""
    with pytest.raises(PrecisionDomainError):
        normalized_legendre(2, 3, "0.1", LegendreStrategy.RECURRENCE, CTX)
    with pytest.raises(PrecisionDomainError):
        normalized_legendre(2, 1, "1.01", LegendreStrategy.EXPLICIT, CTX)


def test_strategy_parse():
    """Test strategy names from the command line."""
    assert LegendreStrategy.parse(" Native ") is LegendreStrategy.NATIVE
    with pytest.raises(PrecisionDomainError):
        LegendreStrategy.parse("fast")


def test_explicit_coefficient_bound():
    """Test the coefficient sum bounds the reduced function on a grid."""
    bound = explicit_coefficient_bound(6, 2, CTX)
    with CTX.workdps():
        for k in range(-9, 10):
            x = mpmath.mpf(k) / 10
            value = normalized_legendre(6, 2, x, LegendreStrategy.EXPLICIT, CTX)
            assert abs(value) / (1 - x * x) <= bound


def test_cache_stats():
    """Test hit counting of the explicit coefficient cache."""
    clear_cache()
    normalized_legendre(5, 2, "0.2", LegendreStrategy.EXPLICIT, CTX)
    normalized_legendre(5, 2, "0.4", LegendreStrategy.EXPLICIT, CTX)
    stats = get_cache_stats()
    assert stats["misses"] == 1
    assert stats["hits"] == 1
    assert stats["hit_rate"] == 0.5


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
