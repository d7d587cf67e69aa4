"""Global-adaptive two-dimensional Gauss-Kronrod integration.

Regions live in a worst-first heap keyed by their local error estimate
``sum_k |w_k| |K_k - G_k|`` (Kronrod minus embedded Gauss product rule,
weighted over the integrand's components). The worst region is bisected
along its longer axis, measured relative to the starting widths, until
the summed error drops below ``tol * max(|value|, floor)``, or to rounding
level for integrals that vanish by symmetry. Final sums are taken over
the leaves in sorted region order, so the result does not depend on the
order regions left the heap.

Integrands may return a single number or a sequence of numbers; with a
sequence, ``weights`` turn the components into the functional that drives
refinement, which lets many related integrals share one partition.
"""

from dataclasses import dataclass, field
import heapq
import itertools
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath

from common.errors import ConvergenceError, PrecisionDomainError
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext, RealLike
from precision.gamma import incomplete_gamma_upper
from quadrature.rules import GKRule, gauss_legendre, gk_rule

logger = setup_logger(__name__)

DEFAULT_RULE_ORDER = 15
DEFAULT_MAX_REGIONS = 200_000
TRUNCATION_SAFETY = 10
# error estimates within this many digits of working precision are rounding noise
NOISE_DIGITS = 3
# xi lines sampled when fitting an envelope, at geometrically growing distances
ENVELOPE_LINES = 6

Integrand = Callable[[BigReal, BigReal], Union[BigReal, Sequence[BigReal]]]


@dataclass(frozen=True, order=True)
class Region2D:
    """Rectangle ``[xi_lo, xi_hi] x [nu_lo, nu_hi]``; ``xi_hi`` may be ``mpmath.inf``."""

    xi_lo: BigReal
    xi_hi: BigReal
    nu_lo: BigReal
    nu_hi: BigReal

    def __post_init__(self):
        if not self.xi_lo < self.xi_hi:
            raise PrecisionDomainError("Region2D", f"need xi_lo < xi_hi, got [{self.xi_lo}, {self.xi_hi}]")
        if not self.nu_lo < self.nu_hi:
            raise PrecisionDomainError("Region2D", f"need nu_lo < nu_hi, got [{self.nu_lo}, {self.nu_hi}]")

    @classmethod
    def of(cls, xi_lo: RealLike, xi_hi: RealLike, nu_lo: RealLike = -1, nu_hi: RealLike = 1) -> "Region2D":
        return cls(mpmath.mpf(xi_lo), mpmath.mpf(xi_hi), mpmath.mpf(nu_lo), mpmath.mpf(nu_hi))

    @property
    def is_finite(self) -> bool:
        return all(mpmath.isfinite(v) for v in (self.xi_lo, self.xi_hi, self.nu_lo, self.nu_hi))

    @property
    def xi_width(self) -> BigReal:
        return self.xi_hi - self.xi_lo

    @property
    def nu_width(self) -> BigReal:
        return self.nu_hi - self.nu_lo

    def split_xi(self, at: Optional[BigReal] = None) -> Tuple["Region2D", "Region2D"]:
        mid = (self.xi_lo + self.xi_hi) / 2 if at is None else at
        return (Region2D(self.xi_lo, mid, self.nu_lo, self.nu_hi),
                Region2D(mid, self.xi_hi, self.nu_lo, self.nu_hi))

    def split_nu(self, at: Optional[BigReal] = None) -> Tuple["Region2D", "Region2D"]:
        mid = (self.nu_lo + self.nu_hi) / 2 if at is None else at
        return (Region2D(self.xi_lo, self.xi_hi, self.nu_lo, mid),
                Region2D(self.xi_lo, self.xi_hi, mid, self.nu_hi))


@dataclass
class QuadResult:
    """Outcome of an adaptive integration.

    Attributes:
        value: Weighted sum of the component integrals (the integral itself
            for a scalar integrand)
        error_estimate: Estimated absolute error of ``value``
        regions_used: Number of leaf regions in the final partition
        evaluations: Number of integrand calls
        components: Integral of each integrand component
        component_errors: Unweighted error estimate of each component
    """

    value: BigReal
    error_estimate: BigReal
    regions_used: int
    evaluations: int
    components: Tuple[BigReal, ...] = field(default_factory=tuple)
    component_errors: Tuple[BigReal, ...] = field(default_factory=tuple)

    def combined(self, other: "QuadResult") -> "QuadResult":
        """Sum of two integrations of the same integrand over adjacent domains."""
        return QuadResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            regions_used=self.regions_used + other.regions_used,
            evaluations=self.evaluations + other.evaluations,
            components=tuple(a + b for a, b in zip(self.components, other.components)),
            component_errors=tuple(a + b for a, b in zip(self.component_errors, other.component_errors)),
        )


@dataclass
class _Leaf:
    region: Region2D
    kronrod: List[BigReal]
    errors: List[BigReal]
    weighted_value: BigReal
    weighted_error: BigReal
    magnitude: BigReal


@dataclass(frozen=True)
class Envelope:
    """Bound ``|f(xi, nu)| <= bound * xi**power * exp(-decay * xi)`` for large xi."""

    bound: BigReal
    power: BigReal
    decay: BigReal

    def tail(self, X: BigReal, nu_width: BigReal, ctx: PrecisionContext) -> BigReal:
        """Integral of the bound over ``[X, inf) x nu-range``."""
        a = self.power + 1
        return (nu_width * self.bound * incomplete_gamma_upper(a, self.decay * X, ctx)
                / self.decay ** a)


def _as_vector(values) -> Sequence[BigReal]:
    if isinstance(values, (list, tuple)):
        return values
    return (values,)


def _apply_rule(f: Integrand, region: Region2D,
                rule: GKRule) -> Tuple[List[BigReal], List[BigReal], List[BigReal], int]:
    """Kronrod and Gauss estimates of each component over ``region``, and Kronrod ones of ``|f|``."""
    hx = region.xi_width / 2
    cx = (region.xi_lo + region.xi_hi) / 2
    hy = region.nu_width / 2
    cy = (region.nu_lo + region.nu_hi) / 2
    xis = [cx + hx * t for t in rule.nodes]
    nus = [cy + hy * t for t in rule.nodes]
    gauss_position = {index: k for k, index in enumerate(rule.gauss_indices)}

    kronrod: Optional[List[BigReal]] = None
    gauss: Optional[List[BigReal]] = None
    absolute: Optional[List[BigReal]] = None
    evaluations = 0
    for i, xi in enumerate(xis):
        wi = rule.kronrod_weights[i]
        gi = gauss_position.get(i)
        for j, nu in enumerate(nus):
            values = _as_vector(f(xi, nu))
            evaluations += 1
            if kronrod is None:
                kronrod = [mpmath.mpf(0)] * len(values)
                gauss = [mpmath.mpf(0)] * len(values)
                absolute = [mpmath.mpf(0)] * len(values)
            wk = wi * rule.kronrod_weights[j]
            for c, v in enumerate(values):
                kronrod[c] += wk * v
                absolute[c] += wk * abs(v)
            if gi is not None:
                gj = gauss_position.get(j)
                if gj is not None:
                    wg = rule.gauss_weights[gi] * rule.gauss_weights[gj]
                    for c, v in enumerate(values):
                        gauss[c] += wg * v
    area = hx * hy
    return ([area * v for v in kronrod], [area * v for v in gauss], [area * v for v in absolute],
            evaluations)


def _make_leaf(f: Integrand, region: Region2D, rule: GKRule,
               weights: Optional[Sequence[BigReal]]) -> Tuple[_Leaf, int]:
    kronrod, gauss, absolute, evaluations = _apply_rule(f, region, rule)
    errors = [abs(k - g) for k, g in zip(kronrod, gauss)]
    if weights is None:
        weights = [1] * len(kronrod)
    elif len(weights) != len(kronrod):
        raise PrecisionDomainError(
            "integrate_2d", f"{len(weights)} weights given for {len(kronrod)} integrand components"
        )
    weighted_value = mpmath.fsum(w * k for w, k in zip(weights, kronrod))
    weighted_error = mpmath.fsum(abs(w) * e for w, e in zip(weights, errors))
    magnitude = mpmath.fsum(abs(w) * a for w, a in zip(weights, absolute))
    return _Leaf(region, kronrod, errors, weighted_value, weighted_error, magnitude), evaluations


def _summarize(leaves: List[_Leaf], weights: Optional[Sequence[BigReal]], evaluations: int) -> QuadResult:
    ordered = sorted(leaves, key=lambda leaf: leaf.region)
    count = len(ordered[0].kronrod)
    components = tuple(mpmath.fsum(leaf.kronrod[c] for leaf in ordered) for c in range(count))
    component_errors = tuple(mpmath.fsum(leaf.errors[c] for leaf in ordered) for c in range(count))
    if weights is None:
        weights = [1] * count
    return QuadResult(
        value=mpmath.fsum(w * v for w, v in zip(weights, components)),
        error_estimate=mpmath.fsum(leaf.weighted_error for leaf in ordered),
        regions_used=len(ordered),
        evaluations=evaluations,
        components=components,
        component_errors=component_errors,
    )


def integrate_2d(f: Integrand, region: Region2D, tol: RealLike, ctx: PrecisionContext, *,
                 weights: Optional[Sequence[RealLike]] = None,
                 rule_order: int = DEFAULT_RULE_ORDER,
                 max_regions: int = DEFAULT_MAX_REGIONS,
                 split_nu_at: Optional[RealLike] = None,
                 floor: Optional[RealLike] = None) -> QuadResult:
    """Integrate ``f(xi, nu)`` over a finite rectangle to relative tolerance ``tol``.

    Args:
        f: Integrand returning a number or a sequence of numbers
        region: Finite integration rectangle
        tol: Relative tolerance on the weighted value
        ctx: Precision context; all arithmetic runs at its working precision
        weights: Component weights defining the refined functional
        rule_order: Gauss order g of the G_g/K_{2g+1} product rule
        max_regions: Leaf budget before giving up
        split_nu_at: Start from two regions split at this nu when it lies inside
        floor: Absolute scale below which the tolerance stops being relative

    Returns:
        QuadResult with the weighted value, its error and per-component values.

    Raises:
        PrecisionDomainError: For a nonpositive tolerance or an infinite region.
        ConvergenceError: When the budget runs out; ``best_estimate`` holds the
            result of the partition reached so far.
    """
    if not region.is_finite:
        raise PrecisionDomainError("integrate_2d", "region must be finite; use integrate_semi_infinite")
    rule = gk_rule(rule_order, ctx)
    with ctx.workdps():
        tol = mpmath.mpf(tol)
        if not tol > 0:
            raise PrecisionDomainError("integrate_2d", f"tol must be positive, got {tol}")
        weights = None if weights is None else [mpmath.mpf(w) for w in weights]

        starts = [region]
        if split_nu_at is not None:
            at = mpmath.mpf(split_nu_at)
            if region.nu_lo < at < region.nu_hi:
                starts = list(region.split_nu(at))
        xi_scale = region.xi_width
        nu_scale = region.nu_width

        counter = itertools.count()
        heap = []
        leaves = {}
        evaluations = 0
        for start in starts:
            leaf, used = _make_leaf(f, start, rule, weights)
            evaluations += used
            key = next(counter)
            leaves[key] = leaf
            heapq.heappush(heap, (-leaf.weighted_error, key))

        total_value = mpmath.fsum(leaf.weighted_value for leaf in leaves.values())
        total_error = mpmath.fsum(leaf.weighted_error for leaf in leaves.values())
        first_scale = max(mpmath.fsum(leaf.magnitude for leaf in leaves.values()), total_error)
        scale_floor = mpmath.mpf(10) ** (-ctx.working_digits) * first_scale
        if floor is not None:
            scale_floor = max(scale_floor, abs(mpmath.mpf(floor)))
        noise = mpmath.mpf(10) ** (NOISE_DIGITS - ctx.working_digits) * first_scale

        while True:
            if total_error <= max(tol * max(abs(total_value), scale_floor), noise):
                # running sums drift under cancellation; confirm with exact sums
                total_value = mpmath.fsum(leaf.weighted_value for leaf in leaves.values())
                total_error = mpmath.fsum(leaf.weighted_error for leaf in leaves.values())
                if total_error <= max(tol * max(abs(total_value), scale_floor), noise):
                    break
            if len(leaves) >= max_regions:
                best = _summarize(list(leaves.values()), weights, evaluations)
                raise ConvergenceError(
                    f"integrate_2d: region budget {max_regions} exhausted with error "
                    f"{mpmath.nstr(best.error_estimate, 5)} on value {mpmath.nstr(best.value, 10)}",
                    best_estimate=best,
                )
            _, key = heapq.heappop(heap)
            worst = leaves.pop(key)
            region_now = worst.region
            if region_now.xi_width / xi_scale >= region_now.nu_width / nu_scale:
                halves = region_now.split_xi()
            else:
                halves = region_now.split_nu()
            total_value -= worst.weighted_value
            total_error -= worst.weighted_error
            for half in halves:
                leaf, used = _make_leaf(f, half, rule, weights)
                evaluations += used
                key = next(counter)
                leaves[key] = leaf
                heapq.heappush(heap, (-leaf.weighted_error, key))
                total_value += leaf.weighted_value
                total_error += leaf.weighted_error

        result = _summarize(list(leaves.values()), weights, evaluations)
    if len(leaves) > max_regions // 2:
        logger.warning(f"integrate_2d used {len(leaves)} of {max_regions} regions")
    logger.debug(f"integrate_2d: {result.regions_used} regions, {result.evaluations} evaluations, "
                 f"error {mpmath.nstr(result.error_estimate, 5)}")
    return result


def fixed_product_rule(f: Integrand, region: Region2D, points: int,
                       ctx: PrecisionContext) -> Union[BigReal, Tuple[BigReal, ...]]:
    """Non-adaptive ``points x points`` Gauss-Legendre product rule.

    Used as an independent reference for the adaptive integrator; returns a
    number for a scalar integrand and a tuple otherwise.
    """
    if not region.is_finite:
        raise PrecisionDomainError("fixed_product_rule", "region must be finite")
    rule = gauss_legendre(points, ctx)
    with ctx.workdps():
        hx = region.xi_width / 2
        cx = (region.xi_lo + region.xi_hi) / 2
        hy = region.nu_width / 2
        cy = (region.nu_lo + region.nu_hi) / 2
        totals = None
        scalar = True
        for x, wx in zip(rule.nodes, rule.weights):
            xi = cx + hx * x
            for y, wy in zip(rule.nodes, rule.weights):
                raw = f(xi, cy + hy * y)
                scalar = not isinstance(raw, (list, tuple))
                values = _as_vector(raw)
                if totals is None:
                    totals = [mpmath.mpf(0)] * len(values)
                w = wx * wy
                for c, v in enumerate(values):
                    totals[c] += w * v
        totals = [hx * hy * t for t in totals]
    return totals[0] if scalar else tuple(totals)


def _line_maximum(f: Integrand, xi: BigReal, nu_lo: BigReal, nu_hi: BigReal,
                  weights: Optional[Sequence[BigReal]], rule: GKRule) -> BigReal:
    """Largest weighted ``sum |f_k|`` over the rule nodes along the line ``xi``."""
    largest = mpmath.mpf(0)
    for t in rule.nodes:
        nu = (nu_lo + nu_hi) / 2 + (nu_hi - nu_lo) / 2 * t
        values = _as_vector(f(xi, nu))
        w = weights if weights is not None else [1] * len(values)
        largest = max(largest, mpmath.fsum(abs(wk) * abs(v) for wk, v in zip(w, values)))
    return largest


def _sampled_envelope(f: Integrand, xi_lo: BigReal, nu_lo: BigReal, nu_hi: BigReal, decay: BigReal,
                      weights: Optional[Sequence[BigReal]], rule: GKRule) -> Envelope:
    """Envelope fitted to samples on the lines ``xi_lo + s (2**k - 1)``, ``s = max(xi_lo, 1)``.

    The power is the steepest log-log slope of ``max |f| exp(decay xi)``
    between neighbouring lines, rounded up, plus one for slopes still rising
    past the last line. The bound covers every sampled line at that power.
    """
    spacing = max(xi_lo, mpmath.mpf(1))
    lines = [xi_lo + spacing * (2 ** k - 1) for k in range(ENVELOPE_LINES)]
    scaled = [_line_maximum(f, xi, nu_lo, nu_hi, weights, rule) * mpmath.exp(decay * xi) for xi in lines]
    slopes = [mpmath.log(h2 / h1) / mpmath.log(x2 / x1)
              for (x1, h1), (x2, h2) in zip(zip(lines, scaled), zip(lines[1:], scaled[1:]))
              if h1 > 0 and h2 > 0]
    power = mpmath.mpf(max(0, int(mpmath.ceil(max(slopes))) + 1) if slopes else 0)
    bound = max(h / xi ** power for xi, h in zip(lines, scaled))
    return Envelope(bound=bound, power=power, decay=decay)


def _truncation_point(envelope: Envelope, xi_lo: BigReal, nu_width: BigReal, target: BigReal) -> BigReal:
    """Smallest convenient X > xi_lo with envelope tail below ``target``."""
    low = PrecisionContext(15, 10)
    with low.workdps():
        target = mpmath.mpf(target)

        def excess(X):
            return mpmath.log(envelope.tail(X, nu_width, low)) - mpmath.log(target)

        step = max(mpmath.mpf(1), (envelope.power + 1) / envelope.decay)
        hi = xi_lo + step
        for _ in range(4000):
            if excess(hi) <= 0:
                break
            step *= 2
            hi = xi_lo + step
        else:
            raise ConvergenceError(f"no truncation point found beyond xi={xi_lo} for target {target}")
        try:
            X = mpmath.findroot(excess, (mpmath.mpf(xi_lo), hi), solver="anderson")
        except (ValueError, ZeroDivisionError):
            X = hi
        if not xi_lo < X <= hi:
            X = hi
        while excess(X) > 0:
            X = min(X * mpmath.mpf("1.001") + mpmath.mpf("0.001"), hi)
    return mpmath.mpf(X)


def integrate_semi_infinite(f: Integrand, xi_lo: RealLike, nu_lo: RealLike, nu_hi: RealLike,
                            tol: RealLike, ctx: PrecisionContext, *,
                            decay: RealLike,
                            envelope: Optional[Envelope] = None,
                            method: str = "truncate",
                            weights: Optional[Sequence[RealLike]] = None,
                            rule_order: int = DEFAULT_RULE_ORDER,
                            max_regions: int = DEFAULT_MAX_REGIONS,
                            split_nu_at: Optional[RealLike] = None) -> QuadResult:
    """Integrate over ``[xi_lo, inf) x [nu_lo, nu_hi]`` for integrands decaying like ``exp(-decay xi)``.

    ``method="truncate"`` cuts the domain where the integral of ``envelope``
    beyond the cut falls below ``tol/10`` of the running value, first against
    the envelope's own total and then, if needed, against the computed value.
    The tail bound is added to the error estimate. Without an ``envelope``
    one is fitted to samples of ``f`` on several xi lines. ``method="transform"``
    maps ``xi = xi_lo + s/(1-s)`` onto ``s in [0, 1)`` instead; it serves as
    a cross-check.

    Raises:
        PrecisionDomainError: If ``decay <= 0`` or the method is unknown.
    """
    with ctx.workdps():
        decay = mpmath.mpf(decay)
        if not decay > 0:
            raise PrecisionDomainError(
                "integrate_semi_infinite", f"decay hint must be positive (integral may diverge), got {decay}"
            )
        xi_lo = mpmath.mpf(xi_lo)
        nu_lo = mpmath.mpf(nu_lo)
        nu_hi = mpmath.mpf(nu_hi)
        tol = mpmath.mpf(tol)
        weights = None if weights is None else [mpmath.mpf(w) for w in weights]

    if method == "transform":
        def mapped(s, nu):
            one_minus = 1 - s
            jacobian = 1 / (one_minus * one_minus)
            values = f(xi_lo + s / one_minus, nu)
            if isinstance(values, (list, tuple)):
                return [jacobian * v for v in values]
            return jacobian * values

        return integrate_2d(mapped, Region2D(mpmath.mpf(0), mpmath.mpf(1), nu_lo, nu_hi),
                            tol, ctx, weights=weights, rule_order=rule_order,
                            max_regions=max_regions, split_nu_at=split_nu_at)
    if method != "truncate":
        raise PrecisionDomainError("integrate_semi_infinite", f"unknown method {method!r}")

    rule = gk_rule(rule_order, ctx)
    with ctx.workdps():
        nu_width = nu_hi - nu_lo
        if envelope is None:
            envelope = _sampled_envelope(f, xi_lo, nu_lo, nu_hi, decay, weights, rule)
        elif envelope.power < 0:
            # xi**p <= xi_lo**p on the domain for negative p
            envelope = Envelope(envelope.bound * xi_lo ** envelope.power, mpmath.mpf(0), envelope.decay)
        low = PrecisionContext(15, 10)
        envelope_total = envelope.tail(xi_lo, nu_width, low)
        if envelope_total == 0:
            zero = mpmath.mpf(0)
            return QuadResult(zero, zero, 0, 0)

        cut = _truncation_point(envelope, xi_lo, nu_width, tol / TRUNCATION_SAFETY * envelope_total)
        result = integrate_2d(f, Region2D(xi_lo, cut, nu_lo, nu_hi), tol, ctx, weights=weights,
                              rule_order=rule_order, max_regions=max_regions, split_nu_at=split_nu_at)
        tiny = mpmath.mpf(10) ** (-ctx.working_digits) * envelope_total
        goal = tol / TRUNCATION_SAFETY * max(abs(result.value), tiny)
        if envelope.tail(cut, nu_width, low) > goal:
            extended = _truncation_point(envelope, xi_lo, nu_width, goal)
            if extended > cut:
                logger.debug(f"extending truncation from xi={mpmath.nstr(cut, 8)} to {mpmath.nstr(extended, 8)}")
                more = integrate_2d(f, Region2D(cut, extended, nu_lo, nu_hi), tol, ctx, weights=weights,
                                    rule_order=rule_order, max_regions=max_regions,
                                    split_nu_at=split_nu_at, floor=abs(result.value))
                result = result.combined(more)
                cut = extended
        result.error_estimate += envelope.tail(cut, nu_width, low)
    logger.debug(f"integrate_semi_infinite: truncated at xi={mpmath.nstr(cut, 8)}")
    return result
