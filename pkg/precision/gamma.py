"""Gamma-family functions at arbitrary precision.

``gamma`` delegates to mpmath; ``gamma_stirling`` is an independent
evaluation (argument shift plus the Stirling series) kept as a cross-check.
The upper incomplete gamma function is evaluated by the power series of the
lower function when ``x < a + 1`` and by a Lentz continued fraction
otherwise; both branches are public so they can be compared at the seam.
"""

import mpmath

from common.errors import ConvergenceError, PrecisionDomainError
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext, RealLike

logger = setup_logger(__name__)

MAX_TERMS = 100_000


def _positive(operation: str, name: str, value: BigReal) -> None:
    if not value > 0:
        raise PrecisionDomainError(operation, f"{name} must be positive, got {value}")


def gamma(a: RealLike, ctx: PrecisionContext) -> BigReal:
    """Gamma function for positive real arguments."""
    with ctx.workdps():
        a = mpmath.mpf(a)
        _positive("gamma", "a", a)
        return mpmath.gamma(a)


def log_gamma(a: RealLike, ctx: PrecisionContext) -> BigReal:
    """Natural logarithm of the gamma function for positive real arguments."""
    with ctx.workdps():
        a = mpmath.mpf(a)
        _positive("log_gamma", "a", a)
        return mpmath.loggamma(a)


def gamma_stirling(a: RealLike, ctx: PrecisionContext) -> BigReal:
    """Gamma function by upward argument shift and the Stirling series.

    The argument is shifted to ``a + k >= working_digits`` so the asymptotic
    series converges to working precision, then divided by the rising
    factorial ``a (a+1) ... (a+k-1)``.
    """
    with ctx.workdps(extra=10):
        a = mpmath.mpf(a)
        _positive("gamma_stirling", "a", a)
        threshold = ctx.working_digits + 10
        shift = max(0, int(mpmath.ceil(threshold - a)))
        z = a + shift
        eps = mpmath.eps
        series = mpmath.mpf(0)
        z_power = z
        z_squared = z * z
        for k in range(1, MAX_TERMS):
            term = mpmath.bernoulli(2 * k) / ((2 * k) * (2 * k - 1) * z_power)
            series += term
            if abs(term) < eps * abs(series):
                break
            z_power *= z_squared
        else:
            raise ConvergenceError(f"gamma_stirling: series did not converge for a={a}")
        log_value = (z - mpmath.mpf(0.5)) * mpmath.log(z) - z + mpmath.log(2 * mpmath.pi) / 2 + series
        value = mpmath.exp(log_value) / mpmath.rf(a, shift)
    with ctx.workdps():
        return +value


def lower_incomplete_gamma_series(a: RealLike, x: RealLike, ctx: PrecisionContext) -> BigReal:
    """Lower incomplete gamma ``gamma(a, x)`` by its power series."""
    with ctx.workdps(extra=5):
        a = mpmath.mpf(a)
        x = mpmath.mpf(x)
        if x == 0:
            return mpmath.mpf(0)
        term = 1 / a
        total = term
        denominator = a
        for _ in range(MAX_TERMS):
            denominator += 1
            term *= x / denominator
            total += term
            if abs(term) < mpmath.eps * abs(total):
                break
        else:
            raise ConvergenceError(f"lower incomplete gamma series stalled at a={a}, x={x}")
        value = total * mpmath.exp(a * mpmath.log(x) - x)
    with ctx.workdps():
        return +value


def upper_incomplete_gamma_cf(a: RealLike, x: RealLike, ctx: PrecisionContext) -> BigReal:
    """Upper incomplete gamma ``Gamma(a, x)`` by the modified Lentz continued fraction."""
    with ctx.workdps(extra=5):
        a = mpmath.mpf(a)
        x = mpmath.mpf(x)
        if not x > 0:
            raise PrecisionDomainError("upper_incomplete_gamma_cf", f"x must be positive, got {x}")
        tiny = mpmath.mpf(10) ** (-(mpmath.mp.dps * 4))
        b = x + 1 - a
        c = 1 / tiny
        d = 1 / b
        h = d
        for i in range(1, MAX_TERMS):
            an = -i * (i - a)
            b += 2
            d = an * d + b
            if abs(d) < tiny:
                d = tiny
            c = b + an / c
            if abs(c) < tiny:
                c = tiny
            d = 1 / d
            delta = d * c
            h *= delta
            if abs(delta - 1) < mpmath.eps:
                break
        else:
            raise ConvergenceError(f"incomplete gamma continued fraction stalled at a={a}, x={x}")
        value = h * mpmath.exp(a * mpmath.log(x) - x)
    with ctx.workdps():
        return +value


def incomplete_gamma_upper(a: RealLike, x: RealLike, ctx: PrecisionContext) -> BigReal:
    """Upper incomplete gamma function ``Gamma(a, x)`` for ``a > 0``, ``x >= 0``."""
    with ctx.workdps():
        a = mpmath.mpf(a)
        x = mpmath.mpf(x)
    _positive("incomplete_gamma_upper", "a", a)
    if x < 0:
        raise PrecisionDomainError("incomplete_gamma_upper", f"x must be nonnegative, got {x}")
    if x == 0:
        return gamma(a, ctx)
    if x < a + 1:
        # Gamma(a) - gamma(a, x) keeps a sizeable fraction of Gamma(a) on this side
        with ctx.workdps(extra=5):
            value = mpmath.gamma(a) - lower_incomplete_gamma_series(a, x, ctx.with_target(ctx.target_digits + 5))
        with ctx.workdps():
            return +value
    return upper_incomplete_gamma_cf(a, x, ctx)


def dirac_gamma(kappa: int, Z: RealLike, c: RealLike, ctx: PrecisionContext) -> BigReal:
    """Relativistic exponent ``sqrt(kappa**2 - Z**2 / c**2)`` of a Dirac radial function.

    Args:
        kappa: Relativistic angular quantum number, a nonzero integer
        Z: Nuclear charge
        c: Speed of light in atomic units

    Raises:
        PrecisionDomainError: For kappa = 0, negative Z, nonpositive c, or a
            supercritical charge with ``kappa**2 <= Z**2 / c**2``.
    """
    if int(kappa) != kappa or kappa == 0:
        raise PrecisionDomainError("dirac_gamma", f"kappa must be a nonzero integer, got {kappa}")
    with ctx.workdps():
        Z = mpmath.mpf(Z)
        c = mpmath.mpf(c)
        if Z < 0:
            raise PrecisionDomainError("dirac_gamma", f"Z must be nonnegative, got {Z}")
        _positive("dirac_gamma", "c", c)
        radicand = mpmath.mpf(int(kappa)) ** 2 - (Z / c) ** 2
        if not radicand > 0:
            raise PrecisionDomainError(
                "dirac_gamma", f"supercritical charge: kappa^2 <= Z^2/c^2 for kappa={kappa}, Z={Z}"
            )
        return mpmath.sqrt(radicand)
