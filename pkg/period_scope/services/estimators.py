from abc import ABC, abstractmethod
from typing import List, Optional, Sequence

from period_scope.models.period import EstimationMethod, MonteCarloParams, PeriodEstimate
from period_scope.models.signal import Signal, as_signal
from period_scope.services.period_finder import (
    estimate_period_montecarlo,
    estimate_period_mvpf,
)
from period_scope.services.svd_baseline import estimate_period_svd
from period_scope.utils.config import Config
from period_scope.utils.errors import BadFlagsError, BadParamsError


class PeriodEstimator(ABC):
    @property
    @abstractmethod
    def method(self) -> EstimationMethod:
        """The tag reported in every estimate."""

    @abstractmethod
    def estimate(self, records: Sequence[Signal]) -> PeriodEstimate:
        """
        Estimates the composite period from one or more observations of a signal.

        Args:
        - records: Noisy observations of the same signal. Estimators that
          work on a single observation use the first one.

        Returns:
        - The PeriodEstimate.
        """

    @staticmethod
    def _first(records: Sequence[Signal]) -> Signal:
        if not records:
            raise BadParamsError("At least one record is required")
        return as_signal(records[0])


class MinimumVarianceEstimator(PeriodEstimator):
    @property
    def method(self) -> EstimationMethod:
        return EstimationMethod.MVPF

    def estimate(self, records: Sequence[Signal]) -> PeriodEstimate:
        return estimate_period_mvpf(self._first(records))


class MonteCarloEstimator(PeriodEstimator):
    def __init__(self, params: Optional[MonteCarloParams] = None):
        """
        Args:
        - params: Resends, columns and rows per assumed period, and the seed.
        """
        self.params = params or MonteCarloParams()

    @property
    def method(self) -> EstimationMethod:
        return EstimationMethod.MONTE_CARLO

    def estimate(self, records: Sequence[Signal]) -> PeriodEstimate:
        return estimate_period_montecarlo(list(records), self.params)


class SvdEstimator(PeriodEstimator):
    def __init__(
        self,
        cap_value: float = Config.SVD_CAP_VALUE,
        zero_threshold: float = Config.SVD_ZERO_THRESHOLD,
    ):
        self.cap_value = cap_value
        self.zero_threshold = zero_threshold

    @property
    def method(self) -> EstimationMethod:
        return EstimationMethod.SVD

    def estimate(self, records: Sequence[Signal]) -> PeriodEstimate:
        return estimate_period_svd(self._first(records), self.cap_value, self.zero_threshold)


METHOD_NAMES: List[str] = ["variance", "montecarlo", "svd"]


def create_estimator(
    method: str,
    params: Optional[MonteCarloParams] = None,
    cap_value: float = Config.SVD_CAP_VALUE,
    zero_threshold: float = Config.SVD_ZERO_THRESHOLD,
) -> PeriodEstimator:
    """
    Build the estimator behind a command-line method name.

    :param method: One of "variance", "montecarlo" or "svd".
    """
    if method == "variance":
        return MinimumVarianceEstimator()
    if method == "montecarlo":
        return MonteCarloEstimator(params)
    if method == "svd":
        return SvdEstimator(cap_value, zero_threshold)
    raise BadFlagsError(f"Unknown method {method!r}; choose one of {METHOD_NAMES}")
