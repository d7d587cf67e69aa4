"""Bench runs: table reproduction, convergence studies, Legendre strategy timing and oracles.

mpmath keeps its working precision in process-global state, so cases run
concurrently in worker processes rather than threads. Reports are always
assembled in configuration order.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
import json
from pathlib import Path
import statistics
import time
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from auxiliary.functions import AuxParams, OrbitalIndices, aux_general_direct, aux_reduced
from bench.config import parse_config
from bench.reference import ReferenceData, load_reference
from common.errors import ConfigError, StrategyMismatchError, ThreeCenterError
from common.id_generator import report_fingerprint
from common.logging_config import setup_logger
from common.metrics import RunMetrics
from precision.context import DEFAULT_GUARD_DIGITS, PrecisionContext, format_scientific, matching_digits
from quadrature.adaptive import DEFAULT_RULE_ORDER, Region2D, fixed_product_rule
from special.legendre import LegendreStrategy
from threecenter.integral import convergence_study, three_center_integral
from validation.comparison import compare, significant_digits
from validation.schema import BenchCase, ReportRow
from validation.writer import render_convergence, write_csv, write_jsonl, write_text

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

FORMATS = {
    "txt": ("txt",),
    "csv": ("csv",),
    "jsonl": ("jsonl",),
    "both": ("txt", "csv"),
    "all": ("txt", "csv", "jsonl"),
}

MIN_REPETITIONS = 3
ORACLE_EXTRA_DIGITS = 20
ORACLE_POINTS = 48
# semi-infinite oracle integrals are cut into panels of this width in xi
ORACLE_PANEL_WIDTH = 4


@dataclass
class RunOptions:
    """Flags shared by the bench commands.

    Attributes:
        digits: Target digits overriding each case's own, or None
        l_max: Summation limit overriding each case's own, or None
        tol: Relative quadrature tolerance, ``10**-digits`` when None
        guard_digits: Guard digits of the precision context
        strategy: Legendre evaluation strategy
        rule_order: Gauss order of the adaptive product rule
        jobs: Worker processes for independent cases
        output_format: Key of :data:`FORMATS`
        out_dir: Directory for report files
    """

    digits: Optional[int] = None
    l_max: Optional[int] = None
    tol: Optional[str] = None
    guard_digits: int = DEFAULT_GUARD_DIGITS
    strategy: LegendreStrategy = LegendreStrategy.RECURRENCE
    rule_order: int = DEFAULT_RULE_ORDER
    jobs: int = 1
    output_format: str = "both"
    out_dir: str = "reports"

    def context(self, case: Optional[BenchCase] = None) -> PrecisionContext:
        digits = self.digits
        if digits is None:
            digits = case.target_digits if case is not None else PrecisionContext.from_env().target_digits
        return PrecisionContext(digits, self.guard_digits)


@dataclass
class BenchRun:
    """Rows of one bench command with their summary, fingerprint and output files."""

    rows: List[ReportRow]
    metrics: RunMetrics
    fingerprint: str
    outputs: Dict[str, Path] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return exit_code_for(self.rows)


def exit_code_for(rows: Sequence[ReportRow]) -> int:
    """3 if any case raised a numerical error, 1 if a referenced case missed its digits, else 0."""
    if any(row.error for row in rows):
        return EXIT_NUMERICAL
    if any(row.reference and row.status != "match" for row in rows):
        return EXIT_MISMATCH
    return EXIT_OK


def _literature_digits(case: BenchCase, value, ctx: PrecisionContext) -> Optional[int]:
    if not case.literature_value:
        return None
    report = compare(case.id, value, case.literature_value, significant_digits(case.literature_value), ctx)
    return report.matching_digits


def run_case(case: BenchCase, options: RunOptions) -> ReportRow:
    """Evaluate one case and compare it with its references.

    Numerical errors are recorded in the row (status ``fail`` when the case
    has a reference) instead of being raised.
    """
    ctx = options.context(case)
    l_max = case.l_max if options.l_max is None else options.l_max
    reference = " ".join(case.reference_value.split()) if case.reference_value else None
    row = ReportRow(case_id=case.id, label=case.label, l_max=l_max, target_digits=ctx.target_digits,
                    computed=None, reference=reference, reference_source=case.reference_source,
                    literature=case.literature_value)
    started = time.perf_counter()
    try:
        a, b = case.orbitals(ctx)
        result = three_center_integral(a, b, case.frame(ctx), l_max, options.tol, ctx,
                                       strategy=options.strategy, rule_order=options.rule_order,
                                       axes=case.polar_axes)
    except ThreeCenterError as e:
        logger.error(f"{case.id}: {type(e).__name__}: {e}")
        row.error = f"{type(e).__name__}: {e}"
        row.status = "fail" if case.reference_value else None
        row.min_digits = case.min_digits if case.reference_value else None
        row.wall_time = time.perf_counter() - started
        return row

    row.computed = ctx.to_decimal(result.value)
    row.truncation_error = format_scientific(result.est_truncation_error, 3)
    row.quad_error = format_scientific(result.quad_error, 3)
    row.regions = result.regions
    row.wall_time = time.perf_counter() - started
    row.extra = {"evaluations": result.evaluations}
    if case.reference_value:
        report = compare(case.id, result.value, case.reference_value, case.min_digits, ctx, case.mantissa_only)
        row.matching_digits = report.matching_digits
        row.min_digits = report.min_digits
        row.status = report.status
    row.literature_digits = _literature_digits(case, result.value, ctx)
    return row


def run_cases(cases: Sequence[BenchCase], options: RunOptions) -> List[ReportRow]:
    """Evaluate cases, up to ``options.jobs`` at a time; results keep the input order."""
    if options.jobs <= 1 or len(cases) <= 1:
        rows = []
        for i, case in enumerate(cases, 1):
            logger.info(f"[{i}/{len(cases)}] {case.id}")
            rows.append(run_case(case, options))
            _log_row(rows[-1])
        return rows

    results: List[Optional[ReportRow]] = [None] * len(cases)
    with ProcessPoolExecutor(max_workers=options.jobs) as executor:
        futures = {executor.submit(run_case, case, options): idx for idx, case in enumerate(cases)}
        for done, future in enumerate(as_completed(futures), 1):
            idx = futures[future]
            results[idx] = future.result()
            logger.info(f"[{done}/{len(cases)}] {cases[idx].id}")
            _log_row(results[idx])
    return results


def _log_row(row: ReportRow) -> None:
    if row.error:
        return
    if row.status:
        logger.info(f"  {row.computed}  {row.matching_digits}/{row.min_digits} digits  {row.status}")
    else:
        logger.info(f"  {row.computed}  (no reference)")


def summarize(rows: Sequence[ReportRow]) -> RunMetrics:
    metrics = RunMetrics()
    for row in rows:
        metrics.record_status(row.status if row.reference else None)
        if row.error:
            metrics.increment("errors")
        else:
            metrics.increment("integrals")
        metrics.increment("regions", row.regions)
        metrics.increment("evaluations", row.extra.get("evaluations", 0))
    metrics.finish()
    return metrics


def write_reports(rows: Sequence[ReportRow], options: RunOptions, stem: str, title: str,
                  metrics: RunMetrics, fingerprint: str, convergence: bool = False) -> Dict[str, Path]:
    """Write the requested report formats plus a metrics file into ``options.out_dir``.

    Raises:
        ConfigError: For an unknown output format.
    """
    if options.output_format not in FORMATS:
        raise ConfigError(f"unknown output format {options.output_format!r}, expected one of "
                          f"{', '.join(FORMATS)}")
    out_dir = Path(options.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for kind in FORMATS[options.output_format]:
        path = out_dir / f"{stem}.{kind}"
        if kind == "txt":
            if convergence:
                path.write_text(render_convergence(rows, title), encoding="utf-8")
            else:
                write_text(rows, str(path), title)
        elif kind == "csv":
            write_csv(rows, str(path))
        else:
            write_jsonl(rows, str(path))
        outputs[kind] = path
    summary = dict(metrics.to_dict(), fingerprint=fingerprint)
    metrics_path = out_dir / f"{stem}.metrics.json"
    metrics_path.write_text(json.dumps(summary, indent=2), encoding="utf-8")
    outputs["metrics"] = metrics_path
    return outputs


def _finish(rows: List[ReportRow], options: RunOptions, stem: str, title: str,
            convergence: bool = False) -> BenchRun:
    metrics = summarize(rows)
    fingerprint = report_fingerprint((row.value_fields() for row in rows), prefix=stem)
    outputs = write_reports(rows, options, stem, title, metrics, fingerprint, convergence)
    logger.info(f"Report fingerprint {fingerprint}")
    return BenchRun(rows, metrics, fingerprint, outputs)


def run_table(config_path: str, options: RunOptions, case_ids: Optional[Sequence[str]] = None,
              reference: Optional[ReferenceData] = None) -> BenchRun:
    """Evaluate every case of a configuration file and write its reports.

    Args:
        config_path: ``[case]`` configuration file
        options: Run flags
        case_ids: Restrict the run to these ids, in configuration order
        reference: Reference data for cases without an inline reference

    Raises:
        ConfigError: For a malformed configuration or an unknown case id.
    """
    reference = reference if reference is not None else load_reference()
    cases = parse_config(config_path, reference)
    if case_ids:
        known = {case.id for case in cases}
        missing = [case_id for case_id in case_ids if case_id not in known]
        if missing:
            raise ConfigError(f"unknown case id(s): {', '.join(missing)}", config_path)
        wanted = set(case_ids)
        cases = [case for case in cases if case.id in wanted]
    stem = Path(config_path).stem
    logger.info(f"Running {len(cases)} cases from {config_path}")
    rows = run_cases(cases, options)
    return _finish(rows, options, stem, f"Three-center nuclear attraction integrals: {stem}")


def _check_limits(limits: Sequence[int]) -> List[int]:
    limits = list(limits)
    if not limits:
        raise ConfigError("l_max list is empty")
    if any(limit < 0 for limit in limits):
        raise ConfigError(f"l_max values must be nonnegative, got {limits}")
    if any(later <= earlier for earlier, later in zip(limits, limits[1:])):
        raise ConfigError(f"l_max list must be strictly ascending, got {limits}")
    return limits


def run_convergence(case: BenchCase, l_max_list: Optional[Sequence[int]], options: RunOptions,
                    reference: Optional[ReferenceData] = None) -> BenchRun:
    """Partial sums of one case at each summation limit, from a single evaluation.

    Every row carries the digits it shares with the previous limit
    (``extra['previous_digits']``) and, where published partial sums exist,
    its comparison against them.

    Raises:
        ConfigError: For an empty, negative or not strictly ascending list.
        ThreeCenterError: When the evaluation fails.
    """
    reference = reference if reference is not None else load_reference()
    published = reference.convergence.get(case.id)
    if l_max_list is None:
        l_max_list = sorted(published.rows) if published else [case.l_max]
    limits = _check_limits(l_max_list)
    ctx = options.context(case)
    a, b = case.orbitals(ctx)
    logger.info(f"Convergence study of {case.id} at l_max {limits}")
    results = convergence_study(a, b, case.frame(ctx), limits, options.tol, ctx,
                                strategy=options.strategy, rule_order=options.rule_order,
                                axes=case.polar_axes)
    rows = []
    for result in results:
        row = ReportRow(case_id=case.id, label=case.label, l_max=result.l_max_used,
                        target_digits=ctx.target_digits, computed=ctx.to_decimal(result.value),
                        truncation_error=format_scientific(result.est_truncation_error, 3),
                        quad_error=format_scientific(result.quad_error, 3), regions=result.regions,
                        wall_time=result.wall_time,
                        extra={"previous_digits": result.matching_digits, "evaluations": 0})
        expected = published.rows.get(result.l_max_used) if published else None
        if expected:
            report = compare(case.id, result.value, expected, published.min_digits, ctx)
            row.reference = report.reference
            row.reference_source = "published partial sum"
            row.matching_digits = report.matching_digits
            row.min_digits = report.min_digits
            row.status = report.status
        rows.append(row)
    if rows:
        rows[-1].extra["evaluations"] = results[-1].evaluations
    return _finish(rows, options, f"{case.id}.convergence", f"Convergence of {case.id} ({case.label})",
                   convergence=True)


@dataclass
class LegendreBenchReport:
    """Timing of reduced auxiliary functions under each Legendre strategy.

    Attributes:
        parameters: Auxiliary parameters as decimal strings
        samples: Wall times per strategy, seconds
        medians: Median wall time per strategy
        values: ``(J, K)`` per strategy, at target digits
        ranking: Strategies from fastest to slowest (host dependent)
    """

    parameters: Dict[str, str]
    samples: Dict[str, List[float]]
    medians: Dict[str, float]
    values: Dict[str, Tuple[str, str]]
    ranking: List[str]

    def to_dict(self) -> dict:
        return asdict(self)

    def render(self) -> str:
        lines = ["Legendre strategy timing", "=" * 24]
        lines.append(", ".join(f"{key}={value}" for key, value in self.parameters.items()))
        for name in self.ranking:
            j_value, k_value = self.values[name]
            lines.append(f"{name:<10} median {self.medians[name]:8.3f}s  "
                         f"({len(self.samples[name])} samples)  J={j_value}  K={k_value}")
        return "\n".join(lines) + "\n"


def bench_legendre(L: int, Lam: int, q: int, N1: str, N2: str, p1: str, p2: str, xi_c: str,
                   repetitions: int = MIN_REPETITIONS, ctx: Optional[PrecisionContext] = None,
                   tol: Optional[str] = None) -> LegendreBenchReport:
    """Time ``aux_reduced`` under every Legendre strategy and check that they agree.

    Raises:
        ConfigError: For fewer than three repetitions.
        StrategyMismatchError: When two strategies disagree at target digits.
    """
    if repetitions < MIN_REPETITIONS:
        raise ConfigError(f"repetitions must be at least {MIN_REPETITIONS}, got {repetitions}")
    ctx = ctx or PrecisionContext.from_env()
    params = AuxParams.of(p1, p2, xi_c, ctx)
    tol = ctx.tolerance() if tol is None else ctx.real(tol)
    samples, raw_values = {}, {}
    for strategy in LegendreStrategy:
        name = strategy.value
        samples[name] = []
        for _ in range(repetitions):
            started = time.perf_counter()
            pair = aux_reduced(L, Lam, q, N1, N2, params, tol, ctx, strategy=strategy)
            samples[name].append(time.perf_counter() - started)
        raw_values[name] = (pair.j_value, pair.k_value)
        logger.debug(f"{name}: median {statistics.median(samples[name]):.3f}s")

    baseline_name = LegendreStrategy.RECURRENCE.value
    baseline = raw_values[baseline_name]
    for name, (j_value, k_value) in raw_values.items():
        if not (ctx.agree(j_value, baseline[0]) and ctx.agree(k_value, baseline[1])):
            raise StrategyMismatchError(
                f"strategy {name} gives J={ctx.to_decimal(j_value)}, K={ctx.to_decimal(k_value)}; "
                f"{baseline_name} gives J={ctx.to_decimal(baseline[0])}, K={ctx.to_decimal(baseline[1])}"
            )
    medians = {name: statistics.median(times) for name, times in samples.items()}
    return LegendreBenchReport(
        parameters={"L": str(L), "Lambda": str(Lam), "q": str(q), "N1": str(N1), "N2": str(N2),
                    "p1": str(p1), "p2": str(p2), "xi_C": str(xi_c)},
        samples=samples,
        medians=medians,
        values={name: (ctx.to_decimal(j), ctx.to_decimal(k)) for name, (j, k) in raw_values.items()},
        ranking=sorted(medians, key=medians.get),
    )


def _q_first_kind(L: int, xi):
    # mpmath's type-3 Legendre Q is the real branch for xi > 1
    return mpmath.re(mpmath.legenq(L, 0, xi, type=3))


def _normalized_zonal(l: int, x):
    return mpmath.sqrt(mpmath.mpf(2 * l + 1) / 2) * mpmath.legendre(l, x)


def _panelled_rule(f, lo, hi, ctx: PrecisionContext):
    total = mpmath.mpf(0)
    edge = lo
    while edge < hi:
        upper = min(edge + ORACLE_PANEL_WIDTH, hi)
        total += fixed_product_rule(f, Region2D(edge, upper, mpmath.mpf(-1), mpmath.mpf(1)), ORACLE_POINTS, ctx)
        edge = upper
    return total


def _oracle_pair(L: int, p1, p2, xi_c, factor, ctx: PrecisionContext):
    """J and K of a zonal (M = 0) auxiliary integral by fixed product rules."""

    def j_integrand(xi, nu):
        return (mpmath.exp(-p1 * xi - p2 * nu) * mpmath.legendre(L, xi) * _normalized_zonal(L, nu)
                * factor(xi, nu))

    def k_integrand(xi, nu):
        return (mpmath.exp(-p1 * xi - p2 * nu) * _q_first_kind(L, xi) * _normalized_zonal(L, nu)
                * factor(xi, nu))

    with ctx.workdps():
        cutoff = xi_c + (ctx.working_digits + 10) * mpmath.log(10) / p1 * 2
        j_value = _panelled_rule(j_integrand, mpmath.mpf(1), xi_c, ctx)
        k_value = _panelled_rule(k_integrand, xi_c, cutoff, ctx)
    return j_value, k_value


def seed_oracles(ctx: PrecisionContext) -> List[dict]:
    """Independent fixed-rule values of two auxiliary integrals, compared with the adaptive route.

    The oracles run at ``ctx`` plus twenty digits with plain mpmath Legendre
    functions; the adaptive values use ``ctx`` itself.
    """
    oracle_ctx = ctx.with_target(ctx.target_digits + ORACLE_EXTRA_DIGITS)
    entries = []
    with oracle_ctx.workdps():
        p1, p2, xi_c = mpmath.mpf("1.5"), mpmath.mpf("1.5"), mpmath.mpf(2)
        j_oracle, k_oracle = _oracle_pair(0, p1, p2, xi_c, lambda xi, nu: (xi + nu) * (xi - nu), oracle_ctx)
    pair = aux_reduced(0, 0, 0, 1, 1, AuxParams.of("1.5", "1.5", 2, ctx), ctx.tolerance(), ctx)
    entries.append(_oracle_entry("reduced L=0 Lambda=0 q=0 N1=N2=1 p1=p2=1.5 xi_C=2",
                                 (j_oracle, k_oracle), pair, ctx))

    def orbital_factor(xi, nu):
        return ((xi + nu) ** 2 * (xi - nu) ** 2 * _normalized_zonal(1, (1 + xi * nu) / (xi + nu))
                * _normalized_zonal(1, (1 - xi * nu) / (xi - nu)))

    with oracle_ctx.workdps():
        p1, p2, xi_c = mpmath.mpf("2.3"), mpmath.mpf("4.5"), mpmath.mpf(2)
        j_oracle, k_oracle = _oracle_pair(1, p1, p2, xi_c, orbital_factor, oracle_ctx)
    indices = OrbitalIndices(2, 1, 0)
    pair = aux_general_direct(1, 0, indices, indices, AuxParams.of("2.3", "4.5", 2, ctx), ctx.tolerance(), ctx)
    entries.append(_oracle_entry("general 2p0|2p0 L=1 M=0 p1=2.3 p2=4.5 xi_C=2",
                                 (j_oracle, k_oracle), pair, ctx))
    return entries


def _oracle_entry(name: str, oracle, pair, ctx: PrecisionContext) -> dict:
    j_oracle, k_oracle = oracle
    return {
        "name": name,
        "J_oracle": ctx.to_decimal(j_oracle),
        "K_oracle": ctx.to_decimal(k_oracle),
        "J": ctx.to_decimal(pair.j_value),
        "K": ctx.to_decimal(pair.k_value),
        "J_digits": matching_digits(pair.j_value, j_oracle, ctx.target_digits),
        "K_digits": matching_digits(pair.k_value, k_oracle, ctx.target_digits),
    }
