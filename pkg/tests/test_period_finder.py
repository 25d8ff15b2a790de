import numpy as np
import pytest

from period_scope.models.period import EstimationMethod, MonteCarloParams, VarianceProfile
from period_scope.services.estimators import create_estimator
from period_scope.services.period_finder import (
    build_data_matrix,
    column_variance_mean,
    detect_dips,
    dip_graph,
    estimate_period_montecarlo,
    estimate_period_mvpf,
    hidden_period_candidates,
    subsampled_profile,
    subsampled_variance,
    variance_profile,
)
from period_scope.services.signals import resend, synthesize
from period_scope.utils.errors import (
    BadParamsError,
    BadPeriodError,
    NoDipsFoundError,
    TooShortError,
)


def test_data_matrix_drops_the_tail():
    D = build_data_matrix(np.arange(10.0), 3)
    assert D.values.shape == (3, 3)
    assert D.rows == 3
    np.testing.assert_array_equal(D.values[2], [6.0, 7.0, 8.0])


@pytest.mark.parametrize("P", [1, 6, 0])
def test_data_matrix_period_range(P):
    with pytest.raises(BadPeriodError):
        build_data_matrix(np.arange(10.0), P)


def test_column_variance_vanishes_at_the_period():
    samples = np.tile([0.3, -1.2, 4.0, 0.1, 7.7], 9)
    assert column_variance_mean(build_data_matrix(samples, 5)) == 0.0
    assert column_variance_mean(build_data_matrix(samples, 10)) == 0.0
    assert column_variance_mean(build_data_matrix(samples, 4)) > 0.0


def test_column_variance_is_population_variance(rng):
    samples = rng.standard_normal(40)
    D = build_data_matrix(samples, 8)
    assert column_variance_mean(D) == pytest.approx(np.var(D.values, axis=0).mean())


def test_profile_covers_every_assumed_period():
    profile = variance_profile(np.sin(np.arange(21.0)))
    assert profile.periods == list(range(2, 11))
    assert profile.signal_length == 21


def test_profile_needs_four_samples():
    with pytest.raises(TooShortError):
        variance_profile([1.0, 2.0, 3.0])


def test_dip_measures():
    profile = VarianceProfile(values={2: 5.0, 3: 1.0, 4: 4.0, 5: 2.0, 6: 6.0}, signal_length=12)
    dips = detect_dips(profile)
    assert [dip.period for dip in dips] == [3, 5]
    first, second = dips
    assert first.measure1 == pytest.approx(5.0)
    assert first.measure2 == pytest.approx(12.0)
    assert first.score == pytest.approx(12.0**4)
    assert second.measure2 == pytest.approx(10.0)
    assert dip_graph(dips) == {3: first.score, 5: second.score}
    assert hidden_period_candidates(dips, top=1) == [3]


def test_plateaus_and_endpoints_are_not_dips():
    profile = VarianceProfile(values={2: 0.0, 3: 1.0, 4: 1.0, 5: 2.0, 6: 0.5}, signal_length=12)
    assert detect_dips(profile) == []


def test_mvpf_finds_the_composite_period(noiseless_7_13):
    estimate = estimate_period_mvpf(noiseless_7_13.clean)
    assert estimate.period == 91
    assert estimate.method is EstimationMethod.MVPF
    candidates = hidden_period_candidates(estimate.dips, top=10)
    assert 91 in candidates


def test_mvpf_on_constant_signal():
    with pytest.raises(NoDipsFoundError):
        estimate_period_mvpf(np.full(64, 2.5))


def test_mvpf_on_the_32db_composite(composite_32db):
    assert estimate_period_mvpf(composite_32db.noisy).period % 176 == 0


def test_subsampling_is_exact_on_small_matrices(rng):
    samples = rng.standard_normal(40)
    params = MonteCarloParams(columns=16, rows=16)
    expected = column_variance_mean(build_data_matrix(samples, 10))
    assert subsampled_variance(samples, 10, params, run_index=3) == pytest.approx(expected)


def test_subsampled_draws_are_keyed_by_seed_run_and_period(rng):
    samples = rng.standard_normal(2000)
    params = MonteCarloParams(columns=4, rows=4, seed=5)
    first = subsampled_variance(samples, 100, params, run_index=0)
    assert subsampled_variance(samples, 100, params, run_index=0) == first
    assert subsampled_variance(samples, 100, params, run_index=1) != first

    profile = subsampled_profile(samples, params, run_index=0)
    assert profile.values[100] == first


def test_monte_carlo_noiseless_lands_on_a_multiple(noiseless_7_13):
    records = resend(noiseless_7_13, 5, seed=2)
    estimate = estimate_period_montecarlo(records, MonteCarloParams(resends=5))
    assert estimate.period % 91 == 0
    assert estimate.method is EstimationMethod.MONTE_CARLO
    assert estimate.runs_consistent >= 1


def test_monte_carlo_single_record_mode(noiseless_7_13):
    params = MonteCarloParams(resends=3, seed=9)
    estimate = estimate_period_montecarlo(noiseless_7_13.clean, params)
    assert estimate.period % 91 == 0
    assert estimate_period_montecarlo([noiseless_7_13.clean], params) == estimate


def test_monte_carlo_record_count_must_match(noiseless_7_13):
    records = resend(noiseless_7_13, 3, seed=2)
    with pytest.raises(BadParamsError):
        estimate_period_montecarlo(records, MonteCarloParams(resends=5))


def test_monte_carlo_on_the_32db_composite(composite_32db):
    records = resend(composite_32db, 5, seed=1)
    estimate = estimate_period_montecarlo(records, MonteCarloParams(resends=5))
    assert estimate.period % 176 == 0


def test_noiseless_monte_carlo_always_returns_a_multiple_of_the_composite(noiseless_7_13):
    for seed in range(20):
        params = MonteCarloParams(resends=5, seed=seed)
        assert estimate_period_montecarlo(noiseless_7_13.clean, params).period % 91 == 0
        records = resend(noiseless_7_13, 5, seed=seed)
        assert estimate_period_montecarlo(records, params).period % 91 == 0


def test_full_subsampling_with_one_run_is_mvpf(composite_32db):
    signal = composite_32db.noisy
    params = MonteCarloParams(resends=1, columns=signal.length, rows=signal.length)
    assert subsampled_profile(signal, params, run_index=0) == variance_profile(signal)
    monte_carlo = estimate_period_montecarlo(signal, params)
    mvpf = estimate_period_mvpf(signal)
    assert monte_carlo.period == mvpf.period
    assert monte_carlo.score == pytest.approx(mvpf.score)


def test_profile_ignores_an_offset(rng):
    samples = rng.standard_normal(300)
    base = variance_profile(samples).as_array()
    shifted = variance_profile(samples + 17.5).as_array()
    np.testing.assert_allclose(shifted, base, rtol=1e-9, atol=1e-12 * base.max())


def test_profile_scales_with_the_square_of_the_gain(rng):
    samples = rng.standard_normal(300)
    base = variance_profile(samples).as_array()
    scaled = variance_profile(-3.0 * samples).as_array()
    np.testing.assert_allclose(scaled, 9.0 * base, rtol=1e-10)


def test_example_data_matrix():
    D = build_data_matrix([1, 2, 3, 1, 2, 3, 1, 2], 3)
    np.testing.assert_array_equal(D.values, [[1, 2, 3], [1, 2, 3]])


def test_variance_vanishes_exactly_at_multiples_of_the_period():
    rng = np.random.default_rng(50)
    for trial in range(50):
        period = int(rng.integers(2, 41))
        template = rng.uniform(-1.0, 1.0, size=period)
        template -= template.mean()
        length = 8 * period + int(rng.integers(0, period))
        signal = np.tile(template, 9)[:length]
        power = float(np.mean(signal * signal))
        profile = variance_profile(signal)
        for P, value in profile.values.items():
            assert (value <= 1e-12 * power) == (P % period == 0), (trial, period, P)


@pytest.mark.parametrize("method", ["variance", "svd"])
def test_noiseless_composite_of_8_11_16(method):
    truth = synthesize([8, 11, 16], 4119, ["tri", "cos", "tri"])
    assert create_estimator(method).estimate([truth.clean]).period == 176


def test_hidden_component_dips_do_not_see_that_component():
    truth = synthesize([8, 11, 16], 4119, ["tri", "cos", "tri"])
    without_8 = truth.clean.samples - truth.components[8].samples
    full = variance_profile(truth.clean)
    partial = variance_profile(without_8)
    for m in range(1, 11):
        assert abs(full.values[8 * m] - partial.values[8 * m]) <= 1e-9 * truth.clean.power


@pytest.mark.slow
@pytest.mark.parametrize("snr_db, min_hits", [(9.0, 15), (5.0, 10)])
def test_mvpf_at_low_snr(snr_db, min_hits):
    hits = 0
    for trial in range(20):
        truth = synthesize(
            [8, 11, 16], 4119, ["tri", "cos", "tri"], snr_db=snr_db, seed=1000 + trial
        )
        hits += estimate_period_mvpf(truth.noisy).period % 176 == 0
    assert hits >= min_hits
