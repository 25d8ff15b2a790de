import logging

from period_scope.models.state import AnalysisState
from period_scope.services.estimators import PeriodEstimator


class PeriodEstimationStage:
    def __init__(self, estimator: PeriodEstimator):
        """
        :param estimator: Any PeriodEstimator; the stage does not care which method it runs.
        """
        self.estimator = estimator

    def estimate_period(self, state: AnalysisState) -> AnalysisState:
        """
        Estimate the composite period of the records in the state.

        :param state: The current analysis state, holding at least the records.
        :return: Updated state with the estimate and the period to fold at.
        """
        estimate = self.estimator.estimate(state["records"])
        logging.info(f"Estimated composite period {estimate.period} with {estimate.method.value}")
        state["estimate"] = estimate
        state["period"] = estimate.period
        return state
