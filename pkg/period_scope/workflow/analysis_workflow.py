from typing import List, Optional, Sequence

from langgraph.graph import END, START, StateGraph

from period_scope.models.signal import Signal, as_signal
from period_scope.models.state import AnalysisState
from period_scope.services.estimators import PeriodEstimator
from period_scope.stages.decomposition_stage import DecompositionStage
from period_scope.stages.estimation_stage import PeriodEstimationStage
from period_scope.stages.reconstruction_stage import ReconstructionStage
from period_scope.workflow.conditions import needs_period_estimate, should_reconstruct


def create_analysis_workflow(
    estimator: PeriodEstimator, dominant_strength: Optional[float] = None
):
    """
    Create the analysis pipeline: period estimation, Ramanujan decomposition and component reconstruction.

    :param estimator: The estimator used when no period is supplied.
    :param dominant_strength: Strength threshold for inferring hidden periods.
    :return: A compiled StateGraph over AnalysisState.
    """
    estimation_stage = PeriodEstimationStage(estimator)
    decomposition_stage = DecompositionStage(dominant_strength)
    reconstruction_stage = ReconstructionStage()

    workflow = StateGraph(AnalysisState)

    workflow.add_node("estimate_period", estimation_stage.estimate_period)
    workflow.add_node("decompose", decomposition_stage.decompose)
    workflow.add_node("reconstruct", reconstruction_stage.reconstruct)

    # Skip estimation when the period is already known
    workflow.add_conditional_edges(START, needs_period_estimate)
    workflow.add_edge("estimate_period", "decompose")
    workflow.add_conditional_edges("decompose", should_reconstruct)
    workflow.add_edge("reconstruct", END)

    return workflow.compile()


def initial_state(
    records: Sequence,
    period: Optional[int] = None,
    hidden_periods: Optional[List[int]] = None,
) -> AnalysisState:
    signals: List[Signal] = [as_signal(record) for record in records]
    return AnalysisState(
        records=signals,
        period=period,
        hidden_periods=list(hidden_periods) if hidden_periods else None,
        estimate=None,
        decomposition=None,
        strengths=None,
        components=None,
    )
