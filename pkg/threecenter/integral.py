"""Three-center nuclear attraction integrals by the Neumann expansion.

``I = (4 sqrt(2 pi) / R_AB) N_{nn'} sum_{L=0}^{l_max} sum_M (-1)^|M| (L-|M|)!/(L+|M|)!
A^M_{mm'} S_{LM}(nu_C, phi_C) [Q_L^|M|(xi_C) J^{LM} + P_L^|M|(xi_C) K^{LM}]``

The auxiliary integrals measure theta_B from B toward A; with the default
common A->B quantization axis the sum is multiplied by ``(-1)**(l'-|m'|)``.

Every (L, M) auxiliary pair of one integral comes out of one J pass and one
K pass of the adaptive integrator; the pass weights are the coefficients
above, so the error control acts on the integral itself. Partial sums over
L are recorded, which lets a convergence study read every smaller ``l_max``
off a single evaluation at the largest one.
"""

from dataclasses import dataclass, field
import time
from typing import List, Optional, Sequence, Tuple

import mpmath

from auxiliary.functions import AuxParams, aux_general_batch
from common.errors import PrecisionDomainError, SingularGeometryError
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext, RealLike, matching_digits
from quadrature.adaptive import DEFAULT_RULE_ORDER
from special.coefficients import a_coeff, allowed_orders, norm_const
from special.harmonics import DEFAULT_CONVENTION, HarmonicConvention, Kind, spherical_harmonic
from special.legendre import LegendreStrategy, legendre_p_series, legendre_q_table
from threecenter.geometry import PolarAxes, ProlateFrame
from threecenter.orbital import Orbital

logger = setup_logger(__name__)

DEFAULT_L_MAX = 30


@dataclass
class TermContribution:
    """Contribution of one (L, M) term to the integral."""

    L: int
    M: int
    value: BigReal
    j_part: BigReal
    k_part: BigReal
    error: BigReal


@dataclass
class IntegralResult:
    """Value of a three-center integral with its truncation and quadrature diagnostics.

    Attributes:
        value: Integral in atomic units
        partial_sums: ``(L, running value)`` for every L up to ``l_max_used``
        l_max_used: Upper summation limit
        est_truncation_error: ``|last - previous|`` of the final two partial sums
        quad_error: Accumulated quadrature error estimate
        wall_time: Seconds spent (shared evaluations are charged to every entry)
        terms: Per-(L, M) contributions in ascending order
        regions: Adaptive regions used by the J and K passes
        evaluations: Integrand evaluations
        matching_digits: Digits shared with the previous entry of a convergence study
    """

    value: BigReal
    partial_sums: List[Tuple[int, BigReal]]
    l_max_used: int
    est_truncation_error: BigReal
    quad_error: BigReal
    wall_time: float
    terms: List[TermContribution] = field(default_factory=list)
    regions: int = 0
    evaluations: int = 0
    matching_digits: Optional[int] = None


@dataclass(frozen=True)
class _Evaluation:
    terms: List[TermContribution]
    regions: int
    evaluations: int
    wall_time: float


def _term_coefficient(L: int, M: int, a: Orbital, b: Orbital, frame: ProlateFrame,
                      convention: HarmonicConvention, ctx: PrecisionContext) -> BigReal:
    order = abs(M)
    amplitude = a_coeff(a.m, b.m, M, ctx)
    if amplitude == 0:
        return amplitude
    harmonic = spherical_harmonic(L, M, frame.nu_c, frame.phi_c, convention, ctx)
    with ctx.workdps():
        return (-1) ** order / mpmath.rf(L - order + 1, 2 * order) * amplitude * harmonic


def _evaluate(a: Orbital, b: Orbital, frame: ProlateFrame, l_max: int, tol: BigReal, ctx: PrecisionContext,
              convention: HarmonicConvention, strategy: LegendreStrategy, rule_order: int,
              axes: PolarAxes) -> _Evaluation:
    if convention.kind is not Kind.REAL:
        raise PrecisionDomainError("three_center_integral", "the summation uses real harmonics")
    if l_max < 0:
        raise PrecisionDomainError("three_center_integral", f"l_max must be nonnegative, got {l_max}")
    if not frame.xi_c > 1:
        raise SingularGeometryError(frame.xi_c)
    frame.check_orientation(a.m, b.m)
    started = time.perf_counter()

    orders = [(L, M) for L in range(l_max + 1) for M in allowed_orders(a.m, b.m) if abs(M) <= L]
    coefficients = [_term_coefficient(L, M, a, b, frame, convention, ctx) for L, M in orders]
    live = [(order, c) for order, c in zip(orders, coefficients) if c != 0]
    if not live:
        with ctx.workdps():
            zero = mpmath.mpf(0)
        return _Evaluation([TermContribution(L, M, zero, zero, zero, zero) for L, M in orders], 0, 0,
                           time.perf_counter() - started)

    params = AuxParams.from_orbitals(a.zeta, b.zeta, frame.R_AB, frame.xi_c, ctx)
    with ctx.workdps():
        prefactor = (4 * mpmath.sqrt(2 * mpmath.pi) / frame.R_AB
                     * norm_const(a.n, b.n, a.zeta, b.zeta, frame.R_AB, ctx) * axes.b_sign(b.l, b.m))
        m_max = max(abs(M) for (_, M), _ in live)
        q_table = legendre_q_table(l_max, m_max, frame.xi_c)
        p_columns = {order: legendre_p_series(l_max, order, frame.xi_c)
                     for order in {abs(M) for (_, M), _ in live}}
        j_weights = [prefactor * c * q_table[abs(M)][L] for (L, M), c in live]
        k_weights = [prefactor * c * p_columns[abs(M)][L - abs(M)] for (L, M), c in live]
        half_tol = tol / 2

    j_result, k_result = aux_general_batch([order for order, _ in live], a.indices, b.indices, params,
                                           half_tol, ctx, j_weights=j_weights, k_weights=k_weights,
                                           strategy=strategy, rule_order=rule_order)
    by_order = {}
    with ctx.workdps():
        for index, ((L, M), _) in enumerate(live):
            j_part = j_weights[index] * j_result.components[index]
            k_part = k_weights[index] * k_result.components[index]
            error = (abs(j_weights[index]) * j_result.component_errors[index]
                     + abs(k_weights[index]) * k_result.component_errors[index])
            by_order[(L, M)] = TermContribution(L, M, j_part + k_part, j_part, k_part, error)
        zero = mpmath.mpf(0)
        terms = [by_order.get((L, M), TermContribution(L, M, zero, zero, zero, zero)) for L, M in orders]
        # truncation tail of the semi-infinite pass is not attributed to any term
        terms_error = mpmath.fsum(t.error for t in terms)
        missing = max(zero, j_result.error_estimate + k_result.error_estimate - terms_error)
        if missing and terms:
            last = terms[-1]
            terms[-1] = TermContribution(last.L, last.M, last.value, last.j_part, last.k_part,
                                         last.error + missing)
    return _Evaluation(terms, j_result.regions_used + k_result.regions_used,
                       j_result.evaluations + k_result.evaluations, time.perf_counter() - started)


def _assemble(evaluation: _Evaluation, l_max: int, ctx: PrecisionContext) -> IntegralResult:
    """Truncate a full evaluation at ``l_max``."""
    with ctx.workdps():
        included = [t for t in evaluation.terms if t.L <= l_max]
        partial_sums = []
        running = mpmath.mpf(0)
        for L in range(l_max + 1):
            running += mpmath.fsum(t.value for t in included if t.L == L)
            partial_sums.append((L, running))
        if len(partial_sums) >= 2:
            truncation = abs(partial_sums[-1][1] - partial_sums[-2][1])
        else:
            truncation = abs(running)
        quad_error = mpmath.fsum(t.error for t in included)
    return IntegralResult(
        value=running,
        partial_sums=partial_sums,
        l_max_used=l_max,
        est_truncation_error=truncation,
        quad_error=quad_error,
        wall_time=evaluation.wall_time,
        terms=included,
        regions=evaluation.regions,
        evaluations=evaluation.evaluations,
    )


def three_center_integral(a: Orbital, b: Orbital, frame: ProlateFrame, l_max: int = DEFAULT_L_MAX,
                          tol: Optional[RealLike] = None, ctx: Optional[PrecisionContext] = None, *,
                          convention: HarmonicConvention = DEFAULT_CONVENTION,
                          strategy: LegendreStrategy = LegendreStrategy.RECURRENCE,
                          rule_order: int = DEFAULT_RULE_ORDER,
                          axes: PolarAxes = PolarAxes.COMMON) -> IntegralResult:
    """Three-center nuclear attraction integral ``<a(A)| 1/r_C |b(B)>``.

    Args:
        a: Orbital on center A
        b: Orbital on center B
        frame: Position of C in the prolate frame of A and B
        l_max: Upper limit of the L summation
        tol: Relative quadrature tolerance, ``10**-target_digits`` by default
        ctx: Precision context, from ``THREECENTER_DIGITS`` by default
        convention: Harmonic convention (real kind only)
        strategy: Evaluation strategy for normalized Legendre functions
        rule_order: Gauss order of the product rule
        axes: Polar axes of the orbital harmonics

    Raises:
        SingularGeometryError: If ``xi_C <= 1``.
        UnsupportedOrientationError: For m != 0 orbitals in a rotated frame.
        ConvergenceError: When a quadrature pass runs out of regions.
    """
    ctx = ctx or PrecisionContext.from_env()
    tol = ctx.tolerance() if tol is None else ctx.real(tol)
    evaluation = _evaluate(a, b, frame, l_max, tol, ctx, convention, strategy, rule_order, axes)
    result = _assemble(evaluation, l_max, ctx)
    logger.debug(f"{a.label}|{b.label} l_max={l_max}: {ctx.to_decimal(result.value)} "
                 f"({result.regions} regions, {result.wall_time:.1f}s)")
    return result


def convergence_study(a: Orbital, b: Orbital, frame: ProlateFrame, l_max_list: Sequence[int],
                      tol: Optional[RealLike] = None, ctx: Optional[PrecisionContext] = None, *,
                      convention: HarmonicConvention = DEFAULT_CONVENTION,
                      strategy: LegendreStrategy = LegendreStrategy.RECURRENCE,
                      rule_order: int = DEFAULT_RULE_ORDER,
                      axes: PolarAxes = PolarAxes.COMMON) -> List[IntegralResult]:
    """Integral values for each summation limit in ``l_max_list``.

    All entries share one evaluation at the largest limit. Each entry after
    the first carries the number of digits it shares with its predecessor.

    Raises:
        PrecisionDomainError: For an empty or not strictly ascending list.
    """
    limits = list(l_max_list)
    if not limits:
        raise PrecisionDomainError("convergence_study", "l_max list is empty")
    if any(later <= earlier for earlier, later in zip(limits, limits[1:])):
        raise PrecisionDomainError("convergence_study", f"l_max list must be strictly ascending, got {limits}")
    ctx = ctx or PrecisionContext.from_env()
    tol = ctx.tolerance() if tol is None else ctx.real(tol)
    evaluation = _evaluate(a, b, frame, limits[-1], tol, ctx, convention, strategy, rule_order, axes)
    results = []
    for l_max in limits:
        result = _assemble(evaluation, l_max, ctx)
        if results:
            result.matching_digits = matching_digits(result.value, results[-1].value, ctx.working_digits)
        results.append(result)
    return results
