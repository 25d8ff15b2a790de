import logging
from typing import Optional, Sequence

import numpy as np

from period_scope.models.signal import Signal, as_signal
from period_scope.models.state import AnalysisState
from period_scope.services.ramanujan import decompose, dominant_divisors, normalized_strengths
from period_scope.utils.config import Config
from period_scope.utils.errors import LengthMismatchError


class DecompositionStage:
    def __init__(self, dominant_strength: Optional[float] = None):
        """
        :param dominant_strength: Normalized strength a subspace needs to be
            read as a hidden period when the state names none.
        """
        self.dominant_strength = (
            Config.DOMINANT_STRENGTH if dominant_strength is None else dominant_strength
        )

    def decompose(self, state: AnalysisState) -> AnalysisState:
        """
        Project the observations onto the factor Ramanujan subspaces of the
        period. Several observations are averaged sample by sample first.
        """
        decomposition = decompose(self._average(state["records"]), state["period"])
        strengths = normalized_strengths(decomposition)
        state["decomposition"] = decomposition
        state["strengths"] = strengths

        if not state.get("hidden_periods"):
            state["hidden_periods"] = self._infer_hidden_periods(strengths)
        return state

    @staticmethod
    def _average(records: Sequence) -> Signal:
        signals = [as_signal(record) for record in records]
        if len(signals) == 1:
            return signals[0]
        lengths = {signal.length for signal in signals}
        if len(lengths) != 1:
            raise LengthMismatchError(f"Cannot average records of lengths {sorted(lengths)}")
        logging.info(f"Averaging {len(signals)} records before folding")
        return Signal(samples=np.mean([signal.samples for signal in signals], axis=0))

    def _infer_hidden_periods(self, strengths: dict) -> list:
        hidden = dominant_divisors(strengths, self.dominant_strength)
        logging.info(f"Inferred hidden periods {hidden} from subspace strengths")
        return hidden
