"""Experiment harness: hit-miss counts of the Monte Carlo finder, runtime
scaling against the SVD baseline, reconstruction quality versus SNR, the
low-SNR hit rate of an estimator, and the DC redistribution check.
"""

import logging
import math
import statistics
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from scipy import stats

from period_scope.models.experiment import (
    DcSplitResult,
    ExperimentConfig,
    ExperimentReport,
    ReconstructionRecord,
    RuntimeRecord,
    SlopeFit,
    SnrSummary,
    TrialRecord,
)
from period_scope.models.signal import GroundTruth
from period_scope.services.estimators import PeriodEstimator, create_estimator
from period_scope.services.period_finder import estimate_period_montecarlo
from period_scope.services.ramanujan import (
    decompose,
    normalized_strengths,
    raw_components,
    redistribute_dc,
)
from period_scope.services.signals import resend, synthesize
from period_scope.utils.errors import BadConfigError, EstimationError, PeriodScopeError
from period_scope.utils.io import read_json, write_json, write_table_csv
from period_scope.utils.rng import derive_seed, make_rng
from period_scope.workflow.analysis_workflow import create_analysis_workflow, initial_state


def load_config(path) -> ExperimentConfig:
    """Read an ExperimentConfig JSON document."""
    try:
        return ExperimentConfig.model_validate_json(read_json(path))
    except ValidationError as e:
        raise BadConfigError(f"Invalid experiment config {path}: {e}") from e


def is_hit(period: Optional[int], composite_period: int, length: int) -> bool:
    """Any multiple of the composite period inside the scanned range counts."""
    return (
        period is not None
        and period % composite_period == 0
        and 2 <= period <= length // 2
    )


def normalized_correlation(a: np.ndarray, b: np.ndarray) -> float:
    """<a, b> / (|a| |b|); zero when either vector vanishes."""
    norm = float(np.linalg.norm(a) * np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.dot(a, b) / norm)


def fit_loglog_slope(method: str, lengths: Sequence[int], seconds: Sequence[float]) -> SlopeFit:
    """Least-squares slope of log(seconds) against log(N)."""
    fit = stats.linregress(np.log(lengths), np.log(seconds))
    return SlopeFit(
        method=method,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_value=float(fit.rvalue),
    )


def _synthesize(config: ExperimentConfig, length: int, snr_db, seed: int) -> GroundTruth:
    return synthesize(
        config.hidden_periods,
        length,
        waveforms=config.waveforms,
        amplitudes=config.amplitudes,
        snr_db=snr_db,
        seed=seed,
    )


def _estimator(config: ExperimentConfig, method: str, seed: int) -> PeriodEstimator:
    params = config.monte_carlo.model_copy(update={"seed": seed})
    return create_estimator(method, params, config.svd_cap, config.svd_zero_threshold)


def _summarize_trials(report: ExperimentReport) -> ExperimentReport:
    seconds = [trial.seconds for trial in report.trials]
    hits = sum(trial.correct for trial in report.trials)
    return report.model_copy(
        update={
            "hits": hits,
            "misses": len(report.trials) - hits,
            "mean_seconds": statistics.fmean(seconds),
            "std_seconds": statistics.pstdev(seconds),
        }
    )


def run_hit_miss(config: ExperimentConfig) -> ExperimentReport:
    """
    Count how often the Monte Carlo finder lands on a multiple of the
    composite period. Every trial draws `resends` fresh noisy records.
    """
    composite = config.composite_period
    trials = []
    for trial in range(config.trials):
        seed = derive_seed(config.master_seed, trial)
        truth = _synthesize(config, config.length, config.snr_db, seed)
        records = resend(truth, config.monte_carlo.resends, seed)
        params = config.monte_carlo.model_copy(update={"seed": derive_seed(seed, 3)})

        start = time.perf_counter()
        try:
            estimate, error = estimate_period_montecarlo(records, params).period, None
        except EstimationError as e:
            estimate, error = None, str(e)
        seconds = time.perf_counter() - start

        correct = is_hit(estimate, composite, config.length)
        logging.info(
            f"Hit-miss trial {trial}: estimate {estimate} "
            f"({'hit' if correct else 'miss'}, {seconds:.3f}s)"
        )
        trials.append(
            TrialRecord(
                trial=trial,
                seed=seed,
                snr_db=config.snr_db,
                estimate=estimate,
                correct=correct,
                seconds=seconds,
                error=error,
            )
        )
    return _summarize_trials(ExperimentReport(experiment="hitmiss", config=config, trials=trials))


def run_runtime_comparison(config: ExperimentConfig) -> ExperimentReport:
    """
    Median wall-clock time of each estimator per signal length, and the
    log-log slope of time against N for each of them. Measurements run one
    at a time.
    """
    lengths = sorted(set(config.n_sweep))
    if len(lengths) < 4 or lengths[-1] < 8 * lengths[0]:
        raise BadConfigError("The runtime sweep needs >= 4 lengths spanning at least 8x")
    if config.repeats < 3:
        raise BadConfigError("The runtime sweep needs at least 3 repeats per point")

    runtimes: List[RuntimeRecord] = []
    for length in lengths:
        seed = derive_seed(config.master_seed, length)
        truth = _synthesize(config, length, config.snr_db, seed)
        records = resend(truth, config.monte_carlo.resends, seed)
        for method in config.bench_methods:
            estimator = _estimator(config, method, derive_seed(seed, 3))
            seconds = []
            for _ in range(config.repeats):
                start = time.perf_counter()
                try:
                    estimator.estimate(records)
                except EstimationError as e:
                    logging.warning(f"{method} failed at N={length}: {e}")
                seconds.append(time.perf_counter() - start)
            median = statistics.median(seconds)
            logging.info(f"Runtime {method} N={length}: median {median:.4f}s")
            runtimes.append(
                RuntimeRecord(method=method, length=length, seconds=seconds, median_seconds=median)
            )

    slopes: Dict[str, SlopeFit] = {}
    for method in config.bench_methods:
        points = [record for record in runtimes if record.method == method]
        slopes[method] = fit_loglog_slope(
            method, [r.length for r in points], [r.median_seconds for r in points]
        )
        logging.info(f"Runtime slope {method}: {slopes[method].slope:.3f}")
    return ExperimentReport(experiment="runtime", config=config, runtimes=runtimes, slopes=slopes)


def _reconstruction_trial(
    config: ExperimentConfig, snr_db, seed: int
) -> ReconstructionRecord:
    truth = _synthesize(config, config.length, snr_db, seed)
    workflow = create_analysis_workflow(_estimator(config, config.method, derive_seed(seed, 3)))
    try:
        state = workflow.invoke(
            initial_state([truth.noisy], hidden_periods=config.hidden_periods)
        )
    except PeriodScopeError as e:
        return ReconstructionRecord(
            snr_db=snr_db, seed=seed, estimated_period=None, period_hit=False, error=str(e)
        )

    period = state["period"]
    components = state["components"]
    correlations = {
        p_i: normalized_correlation(
            components.components[p_i], truth.components[p_i].samples[:period]
        )
        for p_i in config.hidden_periods
    }
    noise = [
        strength
        for q, strength in state["strengths"].items()
        if all(p_i % q for p_i in config.hidden_periods)
    ]
    return ReconstructionRecord(
        snr_db=snr_db,
        seed=seed,
        estimated_period=period,
        period_hit=is_hit(period, config.composite_period, config.length),
        correlations=correlations,
        max_noise_strength=max(noise, default=0.0),
    )


def _mean_or_none(values: List[float]) -> Optional[float]:
    return statistics.fmean(values) if values else None


def run_reconstruction_eval(config: ExperimentConfig) -> ExperimentReport:
    """
    For every SNR: estimate the period, decompose, reconstruct with the equal
    DC split, and score each reconstruction against its true component over
    one estimated period. Also tracks the strongest subspace that belongs to
    no hidden period.
    """
    sweep = list(config.snr_sweep) or [config.snr_db]
    records: List[ReconstructionRecord] = []
    summaries: List[SnrSummary] = []
    for index, snr_db in enumerate(sweep):
        batch = [
            _reconstruction_trial(config, snr_db, derive_seed(config.master_seed, index, trial))
            for trial in range(config.trials)
        ]
        records.extend(batch)
        scored = [record for record in batch if record.error is None]
        summary = SnrSummary(
            snr_db=snr_db,
            trials=len(batch),
            hits=sum(record.period_hit for record in batch),
            mean_correlations={
                p_i: _mean_or_none([r.correlations[p_i] for r in scored])
                for p_i in config.hidden_periods
            },
            mean_noise_strength=_mean_or_none([r.max_noise_strength for r in scored]),
        )
        logging.info(
            f"Reconstruction at {snr_db} dB: correlations {summary.mean_correlations}, "
            f"noise strength {summary.mean_noise_strength}"
        )
        summaries.append(summary)

    rank_correlation = None
    usable = [
        s for s in summaries if s.snr_db is not None and s.mean_noise_strength is not None
    ]
    if len(usable) >= 3:
        rho = stats.spearmanr(
            [s.snr_db for s in usable], [s.mean_noise_strength for s in usable]
        ).statistic
        rank_correlation = None if math.isnan(rho) else float(rho)

    return ExperimentReport(
        experiment="reconstruction",
        config=config,
        reconstructions=records,
        snr_summary=summaries,
        noise_strength_rank_correlation=rank_correlation,
    )


def run_snr_sweep(config: ExperimentConfig) -> ExperimentReport:
    """
    Hit rate of a single-record estimator (config.method) at every SNR of the sweep.
    """
    sweep = list(config.snr_sweep) or [config.snr_db]
    composite = config.composite_period
    trials: List[TrialRecord] = []
    summaries: List[SnrSummary] = []
    for index, snr_db in enumerate(sweep):
        hits = 0
        for trial in range(config.trials):
            seed = derive_seed(config.master_seed, index, trial)
            truth = _synthesize(config, config.length, snr_db, seed)
            estimator = _estimator(config, config.method, derive_seed(seed, 3))
            start = time.perf_counter()
            try:
                estimate, error = estimator.estimate([truth.noisy]).period, None
            except EstimationError as e:
                estimate, error = None, str(e)
            seconds = time.perf_counter() - start
            correct = is_hit(estimate, composite, config.length)
            hits += correct
            trials.append(
                TrialRecord(
                    trial=trial,
                    seed=seed,
                    snr_db=snr_db,
                    estimate=estimate,
                    correct=correct,
                    seconds=seconds,
                    error=error,
                )
            )
        logging.info(f"SNR {snr_db} dB: {hits}/{config.trials} hits with {config.method}")
        summaries.append(SnrSummary(snr_db=snr_db, trials=config.trials, hits=hits))
    report = ExperimentReport(
        experiment="snr_sweep", config=config, trials=trials, snr_summary=summaries
    )
    return _summarize_trials(report)


def run_dc_split_check(config: ExperimentConfig, draws: int = 1000) -> ExperimentReport:
    """
    Compare the equal DC split against random splits drawn uniformly from the
    simplex. The signal carries `config.dc_offset` on top of its zero-mean
    components, and each true component holds an equal share of it.
    """
    if draws < 1:
        raise BadConfigError("draws must be >= 1")
    hidden = config.hidden_periods
    composite = config.composite_period
    truth = _synthesize(config, config.length, config.snr_db, config.master_seed)
    share = config.dc_offset / len(hidden)
    targets = {
        p_i: truth.components[p_i].samples[:composite] + share for p_i in hidden
    }

    dec = decompose(truth.noisy.samples + config.dc_offset, composite)
    raw = raw_components(dec, hidden)

    def total_correlation(alphas=None) -> float:
        rebuilt = redistribute_dc(raw, dec.dc_value, alphas)
        return math.fsum(
            normalized_correlation(rebuilt.components[p_i], targets[p_i]) for p_i in hidden
        )

    equal_total = total_correlation()
    rng = make_rng(config.master_seed, 4)
    best_total, best_alphas = -math.inf, {}
    for weights in rng.dirichlet(np.ones(len(hidden)), size=draws):
        weights = weights / math.fsum(weights)
        alphas = dict(zip(sorted(hidden), (float(w) for w in weights)))
        total = total_correlation(alphas)
        if total > best_total:
            best_total, best_alphas = total, alphas
    logging.info(f"DC split: equal {equal_total:.12f}, best of {draws} random {best_total:.12f}")
    return ExperimentReport(
        experiment="dc_split",
        config=config,
        dc_split=DcSplitResult(
            draws=draws,
            equal_total=equal_total,
            best_random_total=best_total,
            best_random_alphas=best_alphas,
        ),
    )


def write_report(report: ExperimentReport, out_dir) -> List[Path]:
    """
    Write the report JSON and its CSV companions into out_dir.

    :return: The paths written.
    """
    out_dir = Path(out_dir)
    written = [out_dir / f"{report.experiment}.json"]
    write_json(written[0], report)

    if report.trials:
        path = out_dir / f"{report.experiment}_trials.csv"
        write_table_csv(
            path,
            ["trial", "seed", "snr_db", "estimate", "correct", "seconds"],
            (
                [t.trial, t.seed, t.snr_db, t.estimate, int(t.correct), t.seconds]
                for t in report.trials
            ),
        )
        written.append(path)
    if report.runtimes:
        path = out_dir / "runtime.csv"
        write_table_csv(
            path,
            ["method", "N", "median_seconds", "slope"],
            (
                [r.method, r.length, r.median_seconds, report.slopes[r.method].slope]
                for r in report.runtimes
            ),
        )
        written.append(path)
    if report.reconstructions:
        hidden = report.config.hidden_periods
        path = out_dir / "reconstruction.csv"
        write_table_csv(
            path,
            ["snr_db", "seed", "estimated_period", "period_hit", "max_noise_strength"]
            + [f"corr_{p_i}" for p_i in hidden],
            (
                [r.snr_db, r.seed, r.estimated_period, int(r.period_hit), r.max_noise_strength]
                + [r.correlations.get(p_i) for p_i in hidden]
                for r in report.reconstructions
            ),
        )
        written.append(path)
    if report.snr_summary:
        path = out_dir / f"{report.experiment}_snr.csv"
        write_table_csv(
            path,
            ["snr_db", "trials", "hits", "mean_noise_strength"],
            ([s.snr_db, s.trials, s.hits, s.mean_noise_strength] for s in report.snr_summary),
        )
        written.append(path)
    return written
