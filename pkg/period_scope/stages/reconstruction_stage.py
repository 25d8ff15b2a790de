from period_scope.models.state import AnalysisState
from period_scope.services.ramanujan import reconstruct_components


class ReconstructionStage:
    def reconstruct(self, state: AnalysisState) -> AnalysisState:
        """
        Rebuild the hidden components from the decomposition, sharing the DC level equally.
        """
        state["components"] = reconstruct_components(
            state["decomposition"], state["hidden_periods"]
        )
        return state
