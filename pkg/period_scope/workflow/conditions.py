from langgraph.graph import END

from period_scope.models.state import AnalysisState


def needs_period_estimate(state: AnalysisState) -> str:
    """
    Entry routing: estimate the period unless the caller already supplied one.
    """
    if state.get("period") is None:
        return "estimate_period"
    return "decompose"


def should_reconstruct(state: AnalysisState) -> str:
    """
    Reconstruct only when there are hidden periods to rebuild.
    """
    if state.get("hidden_periods"):
        return "reconstruct"
    return END
