"""Gauss-Legendre and Gauss-Kronrod rules on [-1, 1] at arbitrary precision.

Gauss nodes are the zeros of P_g found by Newton iteration from the usual
cosine guesses. The Kronrod extension nodes are the zeros of the Stieltjes
polynomial E_{g+1}, written in the Legendre basis and fixed by the
orthogonality conditions int P_g E_{g+1} x^k dx = 0 (k <= g); each lies
between two consecutive Gauss nodes (or a Gauss node and an endpoint) and
is bracketed there. Kronrod weights follow from exactness on P_0..P_{2g}.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import mpmath

from common.errors import ConvergenceError, PrecisionDomainError
from common.logging_config import setup_logger
from precision.context import BigReal, PrecisionContext
from special.legendre import legendre_p_series

logger = setup_logger(__name__)

NEWTON_MAX_ITERATIONS = 100
RULE_EXTRA_DIGITS = 20
MIN_GAUSS_ORDER = 7


@dataclass(frozen=True)
class GaussRule:
    """Gauss-Legendre rule: ascending nodes and their weights."""

    nodes: Tuple[BigReal, ...]
    weights: Tuple[BigReal, ...]


@dataclass(frozen=True)
class GKRule:
    """Gauss-Kronrod pair on [-1, 1].

    Attributes:
        order: Number of Gauss points g; the Kronrod rule has 2g+1 points
        nodes: All 2g+1 nodes, strictly increasing
        kronrod_weights: Weights of the Kronrod rule, aligned with ``nodes``
        gauss_weights: Weights of the embedded Gauss rule
        gauss_indices: Positions of the Gauss nodes inside ``nodes``
    """

    order: int
    nodes: Tuple[BigReal, ...]
    kronrod_weights: Tuple[BigReal, ...]
    gauss_weights: Tuple[BigReal, ...]
    gauss_indices: Tuple[int, ...]

    @property
    def gauss_nodes(self) -> Tuple[BigReal, ...]:
        return tuple(self.nodes[i] for i in self.gauss_indices)


def _legendre_with_derivative(n: int, x: BigReal) -> Tuple[BigReal, BigReal]:
    column = legendre_p_series(n, 0, x)
    p_n = column[-1]
    p_prev = column[-2] if n >= 1 else mpmath.mpf(0)
    derivative = n * (x * p_n - p_prev) / (x * x - 1)
    return p_n, derivative


def _gauss_nodes_weights(n: int) -> Tuple[list, list]:
    """Gauss-Legendre nodes (ascending) and weights at the current precision."""
    nodes = []
    for k in range(1, n + 1):
        x = mpmath.cos(mpmath.pi * (4 * k - 1) / (4 * n + 2))
        for _ in range(NEWTON_MAX_ITERATIONS):
            p_n, derivative = _legendre_with_derivative(n, x)
            step = p_n / derivative
            x -= step
            if abs(step) <= 4 * mpmath.eps * max(abs(x), 1):
                break
        else:
            raise ConvergenceError(
                f"Newton iteration for Gauss node {k} of order {n} did not converge "
                f"(last x={mpmath.nstr(x, 20)}, last step={mpmath.nstr(step, 5)})"
            )
        nodes.append(x)
    nodes.reverse()
    weights = []
    for x in nodes:
        _, derivative = _legendre_with_derivative(n, x)
        weights.append(2 / ((1 - x * x) * derivative * derivative))
    return nodes, weights


@lru_cache(maxsize=64)
def _gauss_rule_cached(n: int, dps: int) -> GaussRule:
    with mpmath.workdps(dps + RULE_EXTRA_DIGITS):
        nodes, weights = _gauss_nodes_weights(n)
    with mpmath.workdps(dps):
        return GaussRule(tuple(+x for x in nodes), tuple(+w for w in weights))


def gauss_legendre(n: int, ctx: PrecisionContext) -> GaussRule:
    """n-point Gauss-Legendre rule at the working precision of ``ctx``."""
    if n < 1:
        raise PrecisionDomainError("gauss_legendre", f"need at least one point, got {n}")
    return _gauss_rule_cached(n, ctx.working_digits)


def _stieltjes_coefficients(g: int) -> dict:
    """Legendre-basis coefficients of the Stieltjes polynomial E_{g+1} (leading one)."""
    moment_nodes, moment_weights = _gauss_nodes_weights(2 * g + 2)
    columns = [legendre_p_series(g + 1, 0, x) for x in moment_nodes]

    def moment(j: int, k: int) -> BigReal:
        return mpmath.fsum(w * column[g] * column[j] * x ** k
                           for x, w, column in zip(moment_nodes, moment_weights, columns))

    unknowns = list(range((g + 1) % 2, g, 2))
    equations = list(range(1, g + 1, 2))
    matrix = mpmath.matrix(len(equations), len(unknowns))
    rhs = mpmath.matrix(len(equations), 1)
    for row, k in enumerate(equations):
        rhs[row] = -moment(g + 1, k)
        for col, j in enumerate(unknowns):
            matrix[row, col] = moment(j, k)
    solution = mpmath.lu_solve(matrix, rhs)
    coefficients = {g + 1: mpmath.mpf(1)}
    for col, j in enumerate(unknowns):
        coefficients[j] = solution[col]
    return coefficients


def _kronrod_nodes(g: int, gauss_nodes: list) -> list:
    coefficients = _stieltjes_coefficients(g)

    def stieltjes(x):
        column = legendre_p_series(g + 1, 0, x)
        return mpmath.fsum(c * column[j] for j, c in coefficients.items())

    edges = [mpmath.mpf(-1)] + list(gauss_nodes) + [mpmath.mpf(1)]
    extension = []
    for left, right in zip(edges[:-1], edges[1:]):
        try:
            root = mpmath.findroot(stieltjes, (left, right), solver="illinois")
        except (ValueError, ZeroDivisionError) as exc:
            raise ConvergenceError(
                f"Kronrod node search failed for g={g} in ({mpmath.nstr(left, 10)}, "
                f"{mpmath.nstr(right, 10)}): {exc}"
            )
        if not left < root < right:
            raise ConvergenceError(
                f"Kronrod node {mpmath.nstr(root, 15)} escaped its bracket "
                f"({mpmath.nstr(left, 10)}, {mpmath.nstr(right, 10)}) for g={g}"
            )
        extension.append(root)
    return extension


@lru_cache(maxsize=32)
def _gk_rule_cached(g: int, dps: int) -> GKRule:
    with mpmath.workdps(dps + RULE_EXTRA_DIGITS):
        gauss_nodes, gauss_weights = _gauss_nodes_weights(g)
        extension = _kronrod_nodes(g, gauss_nodes)
        nodes = sorted(gauss_nodes + extension)
        size = 2 * g + 1
        matrix = mpmath.matrix(size, size)
        rhs = mpmath.matrix(size, 1)
        rhs[0] = 2
        for col, x in enumerate(nodes):
            column = legendre_p_series(size - 1, 0, x)
            for row in range(size):
                matrix[row, col] = column[row]
        kronrod_weights = mpmath.lu_solve(matrix, rhs)
    with mpmath.workdps(dps):
        rule = GKRule(
            order=g,
            nodes=tuple(+x for x in nodes),
            kronrod_weights=tuple(+kronrod_weights[i] for i in range(size)),
            gauss_weights=tuple(+w for w in gauss_weights),
            gauss_indices=tuple(range(1, size, 2)),
        )
    logger.debug(f"built G{g}/K{2 * g + 1} rule at {dps} digits")
    return rule


def gk_rule(g: int, ctx: PrecisionContext) -> GKRule:
    """Gauss-Kronrod rule with ``g`` Gauss and ``2g+1`` Kronrod points.

    Raises:
        PrecisionDomainError: If ``g < 7``.
        ConvergenceError: If a Gauss or Kronrod node cannot be located.
    """
    if g < MIN_GAUSS_ORDER:
        raise PrecisionDomainError("gk_rule", f"g must be at least {MIN_GAUSS_ORDER}, got {g}")
    return _gk_rule_cached(g, ctx.working_digits)


def get_cache_stats() -> dict:
    """Hit and miss counts of the rule caches."""
    stats = {}
    for name, cached in (("gauss", _gauss_rule_cached), ("gauss_kronrod", _gk_rule_cached)):
        info = cached.cache_info()
        total = info.hits + info.misses
        stats[name] = {
            "hits": info.hits,
            "misses": info.misses,
            "size": info.currsize,
            "maxsize": info.maxsize,
            "hit_rate": info.hits / total if total > 0 else 0.0,
        }
    return stats
