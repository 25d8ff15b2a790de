"""Period estimation by column-variance minimization.

For an assumed period P the signal is cut into floor(N/P) rows of length P.
When P is a multiple of the composite period every column is constant, so
the mean column variance vanishes; at multiples of a single hidden period
only that component's contribution vanishes, which leaves a dip.
"""

import logging
from typing import AbstractSet, Dict, Iterable, List, Optional, Sequence, Set, Union

import numpy as np

from period_scope.models.period import (
    DataMatrix,
    DipRecord,
    EstimationMethod,
    MonteCarloParams,
    PeriodEstimate,
    VarianceProfile,
)
from period_scope.models.signal import Signal, as_signal
from period_scope.utils.config import Config
from period_scope.utils.errors import (
    BadParamsError,
    BadPeriodError,
    NoConsistentDipsError,
    NoDipsFoundError,
    TooShortError,
)
from period_scope.utils.rng import subsample_rng

MIN_SIGNAL_LENGTH = 4


def _column_variances(block: np.ndarray) -> np.ndarray:
    """
    Population variance of every column, computed on data shifted by the
    first row so that constant columns come out exactly zero.
    """
    shifted = block - block[0]
    spread = np.mean(shifted * shifted, axis=0) - np.mean(shifted, axis=0) ** 2
    return np.maximum(spread, 0.0)


def _check_period_range(length: int, period: int) -> None:
    if isinstance(period, bool) or int(period) != period or not 2 <= period <= length // 2:
        raise BadPeriodError(
            f"Assumed period must lie in [2, {length // 2}] for N={length}, got {period!r}"
        )


def _check_length(signal: Signal) -> None:
    if signal.length < MIN_SIGNAL_LENGTH:
        raise TooShortError(
            f"Need at least {MIN_SIGNAL_LENGTH} samples to scan periods, got {signal.length}"
        )


def build_data_matrix(signal, P: int) -> DataMatrix:
    """
    Stack consecutive length-P blocks of the signal as rows, dropping the
    trailing N mod P samples.
    """
    signal = as_signal(signal)
    _check_period_range(signal.length, P)
    rows = signal.length // P
    return DataMatrix(period=P, values=signal.samples[: rows * P].reshape(rows, P))


def column_variance_mean(D: DataMatrix) -> float:
    """Mean over the P columns of each column's population variance."""
    if D.rows < 2:
        raise BadPeriodError(f"Data matrix for P={D.period} has fewer than 2 rows")
    return float(_column_variances(D.values).mean())


def variance_profile(signal) -> VarianceProfile:
    """
    Mean column variance for every assumed period P = 2 .. floor(N/2).
    """
    signal = as_signal(signal)
    _check_length(signal)
    samples = signal.samples
    length = signal.length
    values = {}
    for P in range(2, length // 2 + 1):
        rows = length // P
        block = samples[: rows * P].reshape(rows, P)
        values[P] = float(_column_variances(block).mean())
    return VarianceProfile(values=values, signal_length=length)


def detect_dips(profile: VarianceProfile) -> List[DipRecord]:
    """
    One DipRecord per strict interior local minimum of the profile.
    The first and last assumed periods are never dips.
    """
    periods = profile.periods
    if len(periods) < 3:
        return []
    var = profile.as_array()
    peak = var.max()
    prev, cur, nxt = var[:-2], var[1:-1], var[2:]
    is_dip = (cur < prev) & (cur < nxt)

    dips = []
    for i in np.flatnonzero(is_dip):
        measure1 = float(peak - cur[i])
        measure2 = float(peak + prev[i] + nxt[i] - 3.0 * cur[i])
        dips.append(
            DipRecord(
                period=periods[i + 1],
                measure1=measure1,
                measure2=measure2,
                score=measure2**4,
            )
        )
    return dips


def dip_graph(dips: Iterable[DipRecord]) -> Dict[int, float]:
    """Dip score by assumed period, the 'dip graph' of a variance profile."""
    return {dip.period: dip.score for dip in dips}


def _vanishing_periods(profile: VarianceProfile, power: float) -> Set[int]:
    """Assumed periods whose mean column variance is zero up to rounding."""
    threshold = Config.VANISHING_VARIANCE * power
    return {P for P, value in profile.values.items() if value <= threshold}


def _strongest(dips: Sequence[DipRecord], vanishing: AbstractSet[int] = frozenset()) -> DipRecord:
    # A vanishing dip outranks any other, then the highest score wins and the
    # smallest period breaks ties
    return max(dips, key=lambda dip: (dip.period in vanishing, dip.score, -dip.period))


def hidden_period_candidates(dips: Sequence[DipRecord], top: int = 5) -> List[int]:
    """
    Periods of the strongest dips. Dips sit at multiples of hidden periods,
    so these are the places to look for hidden components.
    """
    ranked = sorted(dips, key=lambda dip: (-dip.score, dip.period))
    return [dip.period for dip in ranked[:top]]


def estimate_period_mvpf(signal) -> PeriodEstimate:
    """
    Minimum Variance Period Finder: the assumed period with the largest dip
    score. Dips where the variance vanishes, as at every multiple of the period
    of a noiseless signal, come before all others.
    """
    signal = as_signal(signal)
    profile = variance_profile(signal)
    dips = detect_dips(profile)
    if not dips:
        raise NoDipsFoundError(
            f"The variance profile of the {signal.length}-sample signal has no dips"
        )
    best = _strongest(dips, _vanishing_periods(profile, signal.power))
    logging.info(f"MVPF estimate: period {best.period} (score {best.score:.6g}, {len(dips)} dips)")
    return PeriodEstimate(
        period=best.period, score=best.score, method=EstimationMethod.MVPF, dips=dips
    )


def subsampled_variance(signal, P: int, params: MonteCarloParams, run_index: int) -> float:
    """
    Mean population variance over `params.columns` random columns of the data
    matrix, each restricted to `params.rows` random rows. All columns or all
    rows are used when there are fewer of them than requested. The draw is a
    pure function of (params.seed, run_index, P).
    """
    signal = as_signal(signal)
    _check_period_range(signal.length, P)
    return _subsampled_variance(signal.samples, P, params, run_index)


def _subsampled_variance(
    samples: np.ndarray, P: int, params: MonteCarloParams, run_index: int
) -> float:
    rows = samples.size // P
    take_all_columns = P <= params.columns
    take_all_rows = rows <= params.rows
    if take_all_columns and take_all_rows:
        block = samples[: rows * P].reshape(rows, P)
        return float(_column_variances(block).mean())

    rng = subsample_rng(params.seed, run_index, P)
    if take_all_columns:
        columns = np.arange(P)
    else:
        columns = rng.choice(P, size=params.columns, replace=False)
    if take_all_rows:
        row_index = np.arange(rows)
    else:
        row_index = rng.choice(rows, size=params.rows, replace=False)
    block = samples[row_index[:, None] * P + columns[None, :]]
    return float(_column_variances(block).mean())


def subsampled_profile(signal, params: MonteCarloParams, run_index: int) -> VarianceProfile:
    """
    The variance profile of one Monte Carlo run. Touches at most
    columns * rows samples per assumed period, so the sweep is linear in N.
    """
    signal = as_signal(signal)
    _check_length(signal)
    samples = signal.samples
    values = {
        P: _subsampled_variance(samples, P, params, run_index)
        for P in range(2, signal.length // 2 + 1)
    }
    return VarianceProfile(values=values, signal_length=signal.length)


def _monte_carlo_runs(records: List[Signal], params: MonteCarloParams) -> List[tuple]:
    if len(records) == 1:
        # Single-record mode: the resends are independent subsample draws
        return [(records[0], run) for run in range(params.resends)]
    if len(records) != params.resends:
        raise BadParamsError(
            f"Expected 1 or {params.resends} records for {params.resends} resends, "
            f"got {len(records)}"
        )
    return [(record, run) for run, record in enumerate(records)]


def estimate_period_montecarlo(
    records: Union[Signal, Sequence], params: Optional[MonteCarloParams] = None
) -> PeriodEstimate:
    """
    Monte Carlo Period Finder.

    Every run builds a subsampled variance profile and finds its dips. Only
    assumed periods that dip in all runs are kept; among them the one with
    the largest mean dip score is returned. A period whose subsampled variance
    vanishes in every run outranks the rest.

    :param records: k independent noisy observations of the same signal, or a
        single observation that is then subsampled k times.
    :param params: Subsampling parameters and seed.
    """
    params = params or MonteCarloParams()
    if isinstance(records, Signal) or (
        isinstance(records, np.ndarray) and records.ndim == 1
    ):
        records = [records]
    records = [as_signal(record) for record in records]
    if not records:
        raise BadParamsError("At least one record is required")

    runs = _monte_carlo_runs(records, params)
    dips_per_run = []
    vanishing = None
    for record, run_index in runs:
        profile = subsampled_profile(record, params, run_index)
        dips = detect_dips(profile)
        dips_per_run.append({dip.period: dip for dip in dips})
        run_vanishing = _vanishing_periods(profile, record.power)
        vanishing = run_vanishing if vanishing is None else vanishing & run_vanishing
        logging.debug(f"Monte Carlo run {run_index}: {len(dips)} dips")

    consistent = set(dips_per_run[0])
    for run_dips in dips_per_run[1:]:
        consistent &= set(run_dips)
    if not consistent:
        raise NoConsistentDipsError(
            f"No assumed period dips in all {len(runs)} Monte Carlo runs"
        )

    evidence = []
    for P in sorted(consistent):
        records_at_p = [run_dips[P] for run_dips in dips_per_run]
        evidence.append(
            DipRecord(
                period=P,
                measure1=float(np.mean([dip.measure1 for dip in records_at_p])),
                measure2=float(np.mean([dip.measure2 for dip in records_at_p])),
                score=float(np.mean([dip.score for dip in records_at_p])),
            )
        )
    best = _strongest(evidence, vanishing)
    logging.info(
        f"Monte Carlo estimate: period {best.period} "
        f"({len(consistent)} consistent dips over {len(runs)} runs)"
    )
    return PeriodEstimate(
        period=best.period,
        score=best.score,
        method=EstimationMethod.MONTE_CARLO,
        dips=evidence,
        runs_consistent=len(consistent),
    )
