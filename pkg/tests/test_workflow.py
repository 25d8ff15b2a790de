import numpy as np
import pytest
from langgraph.graph import END

from period_scope.models.period import EstimationMethod
from period_scope.services.estimators import (
    MinimumVarianceEstimator,
    MonteCarloEstimator,
    SvdEstimator,
    create_estimator,
)
from period_scope.utils.errors import BadFlagsError, LengthMismatchError, NotAFactorError
from period_scope.workflow.analysis_workflow import create_analysis_workflow, initial_state
from period_scope.workflow.conditions import needs_period_estimate, should_reconstruct


@pytest.mark.parametrize(
    "method, cls, tag",
    [
        ("variance", MinimumVarianceEstimator, EstimationMethod.MVPF),
        ("montecarlo", MonteCarloEstimator, EstimationMethod.MONTE_CARLO),
        ("svd", SvdEstimator, EstimationMethod.SVD),
    ],
)
def test_create_estimator(method, cls, tag):
    estimator = create_estimator(method)
    assert isinstance(estimator, cls)
    assert estimator.method is tag


def test_unknown_estimator():
    with pytest.raises(BadFlagsError):
        create_estimator("fft")


def test_routing():
    assert needs_period_estimate(initial_state([np.ones(8)])) == "estimate_period"
    assert needs_period_estimate(initial_state([np.ones(8)], period=4)) == "decompose"
    assert should_reconstruct(initial_state([np.ones(8)])) == END
    assert should_reconstruct(initial_state([np.ones(8)], hidden_periods=[2])) == "reconstruct"


def test_known_period_skips_estimation(noiseless_7_13):
    workflow = create_analysis_workflow(MinimumVarianceEstimator())
    state = workflow.invoke(initial_state([noiseless_7_13.clean], period=91, hidden_periods=[7, 13]))
    assert state.get("estimate") is None
    assert state["period"] == 91
    assert sorted(state["components"].components) == [7, 13]


def test_full_pipeline_infers_hidden_periods(noiseless_7_13):
    workflow = create_analysis_workflow(SvdEstimator())
    state = workflow.invoke(initial_state([noiseless_7_13.clean]))
    assert state["estimate"].method is EstimationMethod.SVD
    assert state["period"] == 91
    assert state["hidden_periods"] == [7, 13]
    np.testing.assert_allclose(
        state["components"].components[7], noiseless_7_13.components[7].samples[:91], atol=1e-9
    )


def test_nothing_to_reconstruct_without_strong_subspaces():
    workflow = create_analysis_workflow(MinimumVarianceEstimator(), dominant_strength=1.1)
    state = workflow.invoke(initial_state([np.tile([1.0, -1.0, 2.0], 10)], period=3))
    assert state["hidden_periods"] == []
    assert state.get("components") is None
    assert set(state["strengths"]) == {1, 3}


def test_pipeline_errors_propagate(noiseless_7_13):
    workflow = create_analysis_workflow(MinimumVarianceEstimator())
    with pytest.raises(NotAFactorError):
        workflow.invoke(initial_state([noiseless_7_13.clean], period=91, hidden_periods=[5]))


def test_several_records_are_averaged_before_folding(noiseless_7_13, rng):
    clean = noiseless_7_13.clean.samples
    noise = rng.standard_normal(clean.size)
    workflow = create_analysis_workflow(MinimumVarianceEstimator())
    state = workflow.invoke(
        initial_state([clean + noise, clean - noise], period=91, hidden_periods=[7, 13])
    )
    folded = clean[:364].reshape(4, 91).mean(axis=0)
    np.testing.assert_allclose(state["decomposition"].folded, folded, atol=1e-12)
    np.testing.assert_allclose(
        state["components"].components[13], noiseless_7_13.components[13].samples[:91], atol=1e-9
    )


def test_records_of_different_lengths_cannot_be_averaged():
    workflow = create_analysis_workflow(MinimumVarianceEstimator())
    with pytest.raises(LengthMismatchError):
        workflow.invoke(initial_state([np.ones(12), np.ones(10)], period=3))
