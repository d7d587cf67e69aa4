"""Auxiliary integrals over the prolate spheroidal (xi, nu) half-strips.

Every auxiliary integral here has the shape

    J = int_1^{xi_C}   int_{-1}^{1} F(xi, nu) P_L^M(xi) Pbar_{LM}(nu) dnu dxi
    K = int_{xi_C}^inf int_{-1}^{1} F(xi, nu) Q_L^M(xi) Pbar_{LM}(nu) dnu dxi

with ``F`` carrying ``exp(-p1 xi - p2 nu)`` and powers of ``xi + nu`` and
``xi - nu``. The reduced family uses ``(xi nu)^q (xi+nu)^N1 (xi-nu)^N2``;
the general family evaluates the two normalized Legendre functions of the
orbital angles pointwise. The expanded route rewrites the general family
as a g-weighted sum of reduced integrals.

Several integrals sharing one domain are evaluated in a single adaptive
pass: the integrand returns one component per integral and the per-node
Legendre columns in xi and in nu are computed once per node.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import mpmath

from common.errors import PrecisionDomainError
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext, RealLike
from quadrature.adaptive import (DEFAULT_RULE_ORDER, Envelope, QuadResult, Region2D, integrate_2d,
                                 integrate_semi_infinite)
from special.coefficients import g_terms
from special.legendre import (LegendreStrategy, explicit_coefficient_bound, legendre_p_series,
                              legendre_q_table, normalized_legendre_at, normalized_legendre_series)

logger = setup_logger(__name__)

# |p2| above which the nu axis starts split at 0
NU_PRESPLIT_THRESHOLD = 5


@dataclass(frozen=True)
class AuxParams:
    """Screening parameters and the C-center coordinate of an auxiliary integral.

    Attributes:
        p1: ``(zeta + zeta') R_AB / 2``, positive
        p2: ``(zeta - zeta') R_AB / 2``, any sign
        xi_c: Prolate coordinate of the attracting center, greater than 1
    """

    p1: BigReal
    p2: BigReal
    xi_c: BigReal

    def __post_init__(self):
        if not self.p1 > 0:
            raise PrecisionDomainError("AuxParams", f"p1 must be positive, got {self.p1}")
        if not self.xi_c > 1:
            raise PrecisionDomainError("AuxParams", f"xi_C must exceed 1, got {self.xi_c}")

    @classmethod
    def of(cls, p1: RealLike, p2: RealLike, xi_c: RealLike, ctx: PrecisionContext) -> "AuxParams":
        return cls(ctx.real(p1), ctx.real(p2), ctx.real(xi_c))

    @classmethod
    def from_orbitals(cls, zeta: RealLike, zeta_prime: RealLike, R: RealLike, xi_c: RealLike,
                      ctx: PrecisionContext) -> "AuxParams":
        """Parameters for orbital exponents ``zeta, zeta'`` at internuclear distance ``R``."""
        with ctx.workdps():
            zeta, zeta_prime, R = mpmath.mpf(zeta), mpmath.mpf(zeta_prime), mpmath.mpf(R)
            return cls((zeta + zeta_prime) * R / 2, (zeta - zeta_prime) * R / 2, mpmath.mpf(xi_c))

    def mirrored(self) -> "AuxParams":
        """Parameters after the reflection ``nu -> -nu`` (``p2 -> -p2``)."""
        return AuxParams(self.p1, -self.p2, self.xi_c)


@dataclass(frozen=True)
class AuxPair:
    """J and K values of one auxiliary integral with their error estimates."""

    j_value: BigReal
    k_value: BigReal
    j_error: BigReal
    k_error: BigReal
    regions: int = 0
    evaluations: int = 0


class OrbitalIndices(NamedTuple):
    """Quantum numbers ``(n, l, m)`` of one orbital; ``n`` may be noninteger."""

    n: RealLike
    l: int
    m: int


@dataclass(frozen=True)
class ReducedTerm:
    """One component of a batched auxiliary pass.

    The component integrand is ``(xi nu)^q (xi+nu)^N1 (xi-nu)^N2`` times the
    Neumann factors of degree ``L`` and order ``order``, divided by
    ``[(xi^2-1)(1-nu^2)]^(sine_power/2)``.
    """

    L: int
    order: int
    q: int = 0
    N1: BigReal = mpmath.mpf(0)
    N2: BigReal = mpmath.mpf(0)
    sine_power: int = 0


# common (xi, nu) factor shared by all components, plus its envelope data
OuterFactor = Callable[[BigReal, BigReal], BigReal]


@dataclass(frozen=True)
class _Outer:
    factor: Optional[OuterFactor]
    bound: BigReal
    power: BigReal


def _check_neumann_orders(operation: str, L: int, order: int) -> None:
    if L < 0 or order < 0 or order > L:
        raise PrecisionDomainError(operation, f"need 0 <= order <= L, got L={L}, order={order}")


def _angular_column(l_max: int, order: int, nu: BigReal, strategy: LegendreStrategy) -> List[BigReal]:
    """``[Pbar_{order order}(nu), ..., Pbar_{l_max order}(nu)]`` under ``strategy``."""
    if strategy is LegendreStrategy.RECURRENCE:
        return normalized_legendre_series(l_max, order, nu)
    return [normalized_legendre_at(l, order, nu, strategy) for l in range(order, l_max + 1)]


def _term_integrand(terms: Sequence[ReducedTerm], params: AuxParams, outer: _Outer,
                    second_kind: bool, strategy: LegendreStrategy):
    """Vector integrand over ``terms``, with Legendre columns cached per node coordinate."""
    l_max = max(t.L for t in terms)
    orders = sorted({t.order for t in terms})
    p1, p2 = params.p1, params.p2

    @lru_cache(maxsize=64)
    def radial(xi: BigReal) -> Dict[int, List[BigReal]]:
        if second_kind:
            table = legendre_q_table(l_max, orders[-1], xi)
            return {M: table[M][M:] for M in orders}
        return {M: legendre_p_series(l_max, M, xi) for M in orders}

    @lru_cache(maxsize=64)
    def angular(nu: BigReal) -> Dict[int, List[BigReal]]:
        return {M: _angular_column(l_max, M, nu, strategy) for M in orders}

    def integrand(xi: BigReal, nu: BigReal) -> List[BigReal]:
        plus = xi + nu
        minus = xi - nu
        log_plus = mpmath.log(plus)
        log_minus = mpmath.log(minus)
        common = mpmath.exp(-p1 * xi - p2 * nu)
        if outer.factor is not None:
            common *= outer.factor(xi, nu)
        xi_nu = xi * nu
        sine_squared = (xi * xi - 1) * (1 - nu * nu)
        xi_columns = radial(xi)
        nu_columns = angular(nu)
        values = []
        for term in terms:
            index = term.L - term.order
            value = common * xi_columns[term.order][index] * nu_columns[term.order][index]
            if term.q:
                value *= xi_nu ** term.q
            if term.N1 or term.N2:
                value *= mpmath.exp(term.N1 * log_plus + term.N2 * log_minus)
            if term.sine_power:
                value /= mpmath.sqrt(sine_squared) ** term.sine_power
            values.append(value)
        return values

    return integrand


def _k_envelope(terms: Sequence[ReducedTerm], weights: Sequence[BigReal], params: AuxParams,
                outer: _Outer, ctx: PrecisionContext) -> Envelope:
    """Envelope of the weighted K functional beyond ``xi_C``.

    Uses ``xi +- nu <= 2 xi``, ``xi +- nu >= xi_C - 1``, the decrease of
    ``|Q_L^M|`` in xi, and ``|Pbar_{LM}| <= sqrt((2L+1)/2)`` (or the explicit
    coefficient sum when a sine power is divided out).
    """
    low = PrecisionContext(15, 10)
    with low.workdps():
        xi_c = mpmath.mpf(params.xi_c)
        l_max = max(t.L for t in terms)
        m_max = max(t.order for t in terms)
        q_table = legendre_q_table(l_max, m_max, xi_c)
        total = mpmath.mpf(0)
        power = mpmath.mpf(0)
        for term, weight in zip(terms, weights):
            if weight == 0:
                continue
            n1, n2 = mpmath.mpf(term.N1), mpmath.mpf(term.N2)
            term_power = term.q + max(n1, 0) + max(n2, 0)
            bound = mpmath.mpf(2) ** (max(n1, 0) + max(n2, 0))
            for exponent in (n1, n2):
                if exponent < 0:
                    bound *= (xi_c - 1) ** exponent
            if term.sine_power:
                bound *= explicit_coefficient_bound(term.L, term.order, low)
                bound /= (xi_c * xi_c - 1) ** (mpmath.mpf(term.sine_power) / 2)
            else:
                bound *= mpmath.sqrt(mpmath.mpf(2 * term.L + 1) / 2)
            bound *= abs(q_table[term.order][term.L])
            total += abs(mpmath.mpf(weight)) * bound
            power = max(power, term_power)
        bound = 2 * total * mpmath.exp(abs(mpmath.mpf(params.p2))) * outer.bound
        return Envelope(bound=bound, power=power + outer.power, decay=mpmath.mpf(params.p1))


def _pass_options(params: AuxParams, rule_order: int) -> dict:
    options = {"rule_order": rule_order}
    if abs(params.p2) > NU_PRESPLIT_THRESHOLD:
        options["split_nu_at"] = 0
    return options


def integrate_terms(terms: Sequence[ReducedTerm], params: AuxParams, tol: RealLike, ctx: PrecisionContext, *,
                    j_weights: Optional[Sequence[RealLike]] = None,
                    k_weights: Optional[Sequence[RealLike]] = None,
                    strategy: LegendreStrategy = LegendreStrategy.RECURRENCE,
                    outer: Optional[_Outer] = None,
                    rule_order: int = DEFAULT_RULE_ORDER,
                    method: str = "truncate") -> Tuple[QuadResult, QuadResult]:
    """One J pass and one K pass over all ``terms``.

    The weights define the functional whose relative error is controlled
    in each pass; by default every component counts with weight one.

    Returns:
        ``(j_result, k_result)``; component ``i`` of each belongs to ``terms[i]``.
    """
    if not terms:
        raise PrecisionDomainError("integrate_terms", "need at least one term")
    for term in terms:
        _check_neumann_orders("integrate_terms", term.L, term.order)
        if term.q < 0 or term.sine_power < 0:
            raise PrecisionDomainError("integrate_terms", f"q and sine_power must be nonnegative: {term}")
    outer = outer or _Outer(None, mpmath.mpf(1), mpmath.mpf(0))
    with ctx.workdps():
        tol = mpmath.mpf(tol)
        j_weights = [mpmath.mpf(w) for w in j_weights] if j_weights is not None else [mpmath.mpf(1)] * len(terms)
        k_weights = [mpmath.mpf(w) for w in k_weights] if k_weights is not None else [mpmath.mpf(1)] * len(terms)
    options = _pass_options(params, rule_order)

    j_integrand = _term_integrand(terms, params, outer, second_kind=False, strategy=strategy)
    j_result = integrate_2d(j_integrand, Region2D.of(1, params.xi_c), tol, ctx, weights=j_weights, **options)

    k_integrand = _term_integrand(terms, params, outer, second_kind=True, strategy=strategy)
    envelope = _k_envelope(terms, k_weights, params, outer, ctx)
    k_result = integrate_semi_infinite(k_integrand, params.xi_c, -1, 1, tol, ctx, decay=params.p1,
                                       envelope=envelope, weights=k_weights, method=method, **options)
    logger.debug(f"auxiliary pass over {len(terms)} terms: J {j_result.regions_used} regions, "
                 f"K {k_result.regions_used} regions")
    return j_result, k_result


def _pair(j_result: QuadResult, k_result: QuadResult, index: int = 0) -> AuxPair:
    return AuxPair(
        j_value=j_result.components[index],
        k_value=k_result.components[index],
        j_error=j_result.component_errors[index],
        k_error=k_result.component_errors[index],
        regions=j_result.regions_used + k_result.regions_used,
        evaluations=j_result.evaluations + k_result.evaluations,
    )


def aux_reduced(L: int, Lam: int, q: int, N1: RealLike, N2: RealLike, params: AuxParams, tol: RealLike,
                ctx: PrecisionContext, strategy: LegendreStrategy = LegendreStrategy.RECURRENCE,
                sine_power: int = 0, method: str = "truncate") -> AuxPair:
    """Reduced auxiliary functions ``J^{L Lam, q}`` and ``K^{L Lam, q}``.

    ``J = int_1^{xi_C} int_{-1}^1 (xi nu)^q (xi+nu)^N1 (xi-nu)^N2 exp(-p1 xi - p2 nu)
    P_L^Lam(xi) Pbar_{L Lam}(nu) dnu dxi``; K integrates ``Q_L^Lam`` over
    ``[xi_C, inf)``. A positive ``sine_power`` divides the integrand by
    ``[(xi^2-1)(1-nu^2)]^(sine_power/2)``.

    Raises:
        PrecisionDomainError: For ``Lam > L`` or negative ``q``.
        ConvergenceError: When either quadrature runs out of regions.
    """
    _check_neumann_orders("aux_reduced", L, Lam)
    if q < 0:
        raise PrecisionDomainError("aux_reduced", f"q must be nonnegative, got {q}")
    term = ReducedTerm(L, Lam, q, ctx.real(N1), ctx.real(N2), sine_power)
    j_result, k_result = integrate_terms([term], params, tol, ctx, strategy=strategy, method=method)
    return _pair(j_result, k_result)


def _orbital_outer(a: OrbitalIndices, b: OrbitalIndices, strategy: LegendreStrategy,
                   ctx: PrecisionContext) -> _Outer:
    """Pointwise orbital factor ``(xi+nu)^n (xi-nu)^n' Pbar_{l|m|}(cos theta_A) Pbar_{l'|m'|}(cos theta_B)``."""
    n, n_prime = ctx.real(a.n), ctx.real(b.n)
    lam, lam_prime = abs(a.m), abs(b.m)

    def factor(xi: BigReal, nu: BigReal) -> BigReal:
        plus = xi + nu
        minus = xi - nu
        cos_a = (1 + xi * nu) / plus
        cos_b = (1 - xi * nu) / minus
        return (mpmath.exp(n * mpmath.log(plus) + n_prime * mpmath.log(minus))
                * normalized_legendre_at(a.l, lam, cos_a, strategy)
                * normalized_legendre_at(b.l, lam_prime, cos_b, strategy))

    with ctx.workdps():
        bound = mpmath.sqrt(mpmath.mpf(2 * a.l + 1) / 2) * mpmath.sqrt(mpmath.mpf(2 * b.l + 1) / 2)
        bound *= mpmath.mpf(2) ** (n + n_prime)
    return _Outer(factor, bound, n + n_prime)


def _check_orbital_indices(operation: str, a: OrbitalIndices, b: OrbitalIndices) -> None:
    for name, orbital in (("a", a), ("b", b)):
        if not mpmath.mpf(orbital.n) > 0 or orbital.l < 0 or abs(orbital.m) > orbital.l:
            raise PrecisionDomainError(operation, f"invalid orbital indices {name}={tuple(orbital)}")


def aux_general_batch(orders: Sequence[Tuple[int, int]], a: OrbitalIndices, b: OrbitalIndices,
                      params: AuxParams, tol: RealLike, ctx: PrecisionContext, *,
                      j_weights: Optional[Sequence[RealLike]] = None,
                      k_weights: Optional[Sequence[RealLike]] = None,
                      strategy: LegendreStrategy = LegendreStrategy.RECURRENCE,
                      rule_order: int = DEFAULT_RULE_ORDER) -> Tuple[QuadResult, QuadResult]:
    """General auxiliary functions for several ``(L, |M|)`` in one J pass and one K pass."""
    _check_orbital_indices("aux_general_batch", a, b)
    terms = [ReducedTerm(L, abs(M)) for L, M in orders]
    outer = _orbital_outer(a, b, strategy, ctx)
    return integrate_terms(terms, params, tol, ctx, j_weights=j_weights, k_weights=k_weights,
                           strategy=strategy, outer=outer, rule_order=rule_order)


def aux_general_direct(L: int, M: int, a: OrbitalIndices, b: OrbitalIndices, params: AuxParams,
                       tol: RealLike, ctx: PrecisionContext,
                       strategy: LegendreStrategy = LegendreStrategy.RECURRENCE) -> AuxPair:
    """General auxiliary functions ``J^{LM}``, ``K^{LM}`` by direct quadrature.

    The orbital Legendre functions are evaluated at
    ``cos theta_A = (1 + xi nu)/(xi + nu)`` and
    ``cos theta_B = (1 - xi nu)/(xi - nu)`` (theta_B measured from B toward A)
    at every node. ``M`` may be signed; only ``|M|`` enters.
    """
    _check_neumann_orders("aux_general_direct", L, abs(M))
    j_result, k_result = aux_general_batch([(L, M)], a, b, params, tol, ctx, strategy=strategy)
    return _pair(j_result, k_result)


def aux_general_expanded(L: int, M: int, a: OrbitalIndices, b: OrbitalIndices, params: AuxParams,
                         tol: RealLike, ctx: PrecisionContext,
                         strategy: LegendreStrategy = LegendreStrategy.RECURRENCE) -> AuxPair:
    """General auxiliary functions assembled from reduced ones with g coefficients.

    With ``Lambda = max(|m|, |m'|)`` the orbital Legendre product becomes
    ``sum g (xi nu)^q / ((xi+nu)^alpha (xi-nu)^beta)`` divided by
    ``[(xi^2-1)(1-nu^2)]^(|lambda-lambda'|/2)``, so each term is a reduced
    integral with ``N1 = n - alpha``, ``N2 = n' - beta`` and that sine power.
    All terms share one J pass and one K pass weighted by their g values.

    Raises:
        PrecisionDomainError: For noninteger ``l`` or ``l'`` or invalid indices.
    """
    _check_neumann_orders("aux_general_expanded", L, abs(M))
    _check_orbital_indices("aux_general_expanded", a, b)
    if int(a.l) != a.l or int(b.l) != b.l:
        raise PrecisionDomainError("aux_general_expanded", "l and l' must be integers")
    lam, lam_prime = abs(a.m), abs(b.m)
    Lambda = max(lam, lam_prime)
    sine_power = 2 * Lambda - lam - lam_prime
    expansion = g_terms(a.l, lam, b.l, lam_prime, Lambda, ctx)
    with ctx.workdps():
        n, n_prime = ctx.real(a.n), ctx.real(b.n)
        terms = [ReducedTerm(L, abs(M), q, n - alpha, n_prime - beta, sine_power)
                 for alpha, beta, q, _ in expansion]
        weights = [value for _, _, _, value in expansion]
    if not terms:
        with ctx.workdps():
            zero = mpmath.mpf(0)
        return AuxPair(zero, zero, zero, zero)
    j_result, k_result = integrate_terms(terms, params, tol, ctx, j_weights=weights, k_weights=weights,
                                         strategy=strategy)
    return AuxPair(j_value=j_result.value, k_value=k_result.value,
                   j_error=j_result.error_estimate, k_error=k_result.error_estimate,
                   regions=j_result.regions_used + k_result.regions_used,
                   evaluations=j_result.evaluations + k_result.evaluations)
