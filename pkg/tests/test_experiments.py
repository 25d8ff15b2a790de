import json

import numpy as np
import pytest

from period_scope.models.experiment import ExperimentConfig, ExperimentReport
from period_scope.services.experiments import (
    fit_loglog_slope,
    is_hit,
    load_config,
    normalized_correlation,
    run_dc_split_check,
    run_hit_miss,
    run_reconstruction_eval,
    run_runtime_comparison,
    run_snr_sweep,
    write_report,
)
from period_scope.utils.errors import BadConfigError


def test_normalized_correlation():
    a = np.array([1.0, 2.0, -1.0])
    assert normalized_correlation(a, 3.0 * a) == pytest.approx(1.0)
    assert normalized_correlation(a, -a) == pytest.approx(-1.0)
    assert normalized_correlation(a, np.zeros(3)) == 0.0


def test_loglog_slope_of_a_power_law():
    lengths = [1024, 2048, 4096, 8192]
    fit = fit_loglog_slope("svd", lengths, [3e-9 * n**2 for n in lengths])
    assert fit.slope == pytest.approx(2.0)
    assert fit.r_value == pytest.approx(1.0)


@pytest.mark.parametrize(
    "period, expected", [(176, True), (352, True), (175, False), (None, False), (2112, False)]
)
def test_hits_are_multiples_inside_the_scanned_range(period, expected):
    assert is_hit(period, 176, 4119) is expected


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(hidden_periods=[8, 11, 16], N=500)
    with pytest.raises(ValueError):
        ExperimentConfig(hidden_periods=[8, 11], waveforms=["tri"], amplitudes=[1.0])
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    assert ExperimentConfig().composite_period == 176


def test_load_config(tmp_path):
    path = tmp_path / "config.json"
    document = {
        "hidden_periods": [7, 13],
        "waveforms": ["tri", "cos"],
        "amplitudes": [1, 2],
        "N": 500,
        "trials": 2,
    }
    path.write_text(json.dumps(document))
    config = load_config(path)
    assert config.length == 500
    assert config.composite_period == 91

    path.write_text(json.dumps({"hidden_periods": [7, 13], "unknown": 1}))
    with pytest.raises(BadConfigError):
        load_config(path)


def test_noiseless_hit_miss_hits_every_trial(small_config):
    report = run_hit_miss(small_config)
    assert report.hits == 3
    assert report.misses == 0
    assert len(report.trials) == 3
    assert all(trial.estimate % 91 == 0 for trial in report.trials)
    assert all(trial.seconds > 0 for trial in report.trials)


def test_noiseless_hit_miss_over_twenty_trials(small_config):
    report = run_hit_miss(small_config.model_copy(update={"trials": 20}))
    assert report.hits == 20
    assert all(trial.estimate % 91 == 0 for trial in report.trials)


def test_reports_replay_from_the_master_seed(small_config):
    config = small_config.model_copy(update={"snr_db": 20.0})
    first = run_hit_miss(config)
    second = run_hit_miss(config)
    assert first.deterministic_json() == second.deterministic_json()
    assert "seconds" not in first.deterministic_json()


def test_runtime_sweep_is_checked(small_config):
    with pytest.raises(BadConfigError):
        run_runtime_comparison(small_config.model_copy(update={"n_sweep": [400, 800, 3200]}))
    with pytest.raises(BadConfigError):
        run_runtime_comparison(small_config.model_copy(update={"n_sweep": [400, 500, 600, 700]}))
    with pytest.raises(BadConfigError):
        run_runtime_comparison(
            small_config.model_copy(update={"n_sweep": [400, 800, 1600, 3200], "repeats": 2})
        )


def test_noiseless_reconstruction_is_exact(small_config):
    report = run_reconstruction_eval(small_config.model_copy(update={"trials": 1}))
    (record,) = report.reconstructions
    assert record.estimated_period == 91
    assert record.period_hit
    for p_i in (7, 13):
        assert record.correlations[p_i] == pytest.approx(1.0, abs=1e-9)
    assert record.max_noise_strength == pytest.approx(0.0, abs=1e-12)
    assert report.snr_summary[0].snr_db is None


def test_snr_sweep_counts_hits(small_config):
    config = small_config.model_copy(update={"snr_sweep": [40.0, 30.0], "trials": 2})
    report = run_snr_sweep(config)
    assert [summary.snr_db for summary in report.snr_summary] == [40.0, 30.0]
    assert report.hits + report.misses == 4
    assert report.hits == sum(summary.hits for summary in report.snr_summary)


def test_equal_dc_split_is_optimal(small_config):
    report = run_dc_split_check(small_config, draws=1000)
    result = report.dc_split
    assert result.draws == 1000
    assert result.equal_total == pytest.approx(2.0, abs=1e-9)
    assert result.equal_total >= result.best_random_total - 1e-9


def test_write_report(tmp_path, small_config):
    report = run_hit_miss(small_config)
    paths = write_report(report, tmp_path)
    assert [path.name for path in paths] == ["hitmiss.json", "hitmiss_trials.csv"]
    loaded = ExperimentReport.model_validate_json(paths[0].read_text())
    assert loaded.schema_version == 1
    assert loaded.config.length == 400
    assert '"N": 400' in paths[0].read_text()
    lines = paths[1].read_text().splitlines()
    assert lines[0] == "trial,seed,snr_db,estimate,correct,seconds"
    assert len(lines) == 4


@pytest.mark.slow
@pytest.mark.parametrize("resends, min_hits", [(5, 19), (2, 17)])
def test_hit_miss_at_32db(resends, min_hits):
    config = ExperimentConfig(
        snr_db=32.0,
        trials=20,
        master_seed=7,
        monte_carlo={"resends": resends},
    )
    report = run_hit_miss(config)
    assert report.hits + report.misses == 20
    assert report.hits >= min_hits


@pytest.mark.slow
def test_noiseless_hit_miss_on_the_composite():
    report = run_hit_miss(ExperimentConfig(snr_db=None, trials=20))
    assert report.hits == 20


@pytest.mark.slow
def test_noise_strength_falls_with_snr():
    report = run_reconstruction_eval(
        ExperimentConfig(snr_sweep=[5.0, 10.0, 20.0, 35.0], trials=10, master_seed=3)
    )
    assert report.noise_strength_rank_correlation <= -0.8
    at_35_db = report.snr_summary[-1]
    assert at_35_db.mean_noise_strength < 0.02


@pytest.mark.slow
def test_runtime_scaling():
    config = ExperimentConfig(n_sweep=[4096, 8192, 16384, 32768], repeats=3, snr_db=32.0)
    report = run_runtime_comparison(config)
    assert 0.7 <= report.slopes["montecarlo"].slope <= 1.3
    assert report.slopes["svd"].slope >= 1.7
    largest = {r.method: r.median_seconds for r in report.runtimes if r.length == 32768}
    assert largest["montecarlo"] < largest["svd"]
