from enum import Enum
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from period_scope.models.arrays import FloatMatrix
from period_scope.utils.config import Config


class EstimationMethod(str, Enum):
    MVPF = "MVPF"
    MONTE_CARLO = "MonteCarlo"
    SVD = "SVD"


class DataMatrix(BaseModel):
    """
    The floor(N/P) x P matrix whose rows are consecutive length-P blocks of the signal.
    Trailing samples that do not fill a whole block are dropped.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    period: int = Field(..., ge=1, description="Assumed period P.")
    values: FloatMatrix

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])


class VarianceProfile(BaseModel):
    """
    Mean column variance of the data matrix for every assumed period P in 2..floor(N/2).
    """

    model_config = ConfigDict(frozen=True)

    values: Dict[int, float] = Field(..., description="Assumed period P -> mean column variance.")
    signal_length: int = Field(..., ge=1)

    @property
    def periods(self) -> List[int]:
        return sorted(self.values)

    def as_array(self) -> np.ndarray:
        return np.array([self.values[P] for P in self.periods], dtype=np.float64)


class DipRecord(BaseModel):
    """
    A strict interior local minimum of a variance profile, with its dip magnitudes.
    """

    model_config = ConfigDict(frozen=True)

    period: int = Field(..., description="Assumed period P where the dip sits.")
    measure1: float = Field(..., description="max(var) - var[P].")
    measure2: float = Field(
        ..., description="max(var) + var[P-1] + var[P+1] - 3 var[P]."
    )
    score: float = Field(..., description="measure2 raised to the 4th power.")


class MonteCarloParams(BaseModel):
    """
    Parameters of the randomized period finder.
    """

    model_config = ConfigDict(frozen=True)

    resends: int = Field(Config.MC_RESENDS, ge=1, description="Number of runs k that must agree.")
    columns: int = Field(
        Config.MC_COLUMNS, ge=1, description="Columns c sampled per assumed period."
    )
    rows: int = Field(Config.MC_ROWS, ge=2, description="Rows L sampled per column.")
    seed: int = Field(Config.DEFAULT_SEED, description="Seed of the subsampling streams.")


class PeriodEstimate(BaseModel):
    """
    The output of any period estimator.
    """

    model_config = ConfigDict(frozen=True)

    period: int = Field(..., ge=2)
    score: float
    method: EstimationMethod
    dips: List[DipRecord] = Field(default_factory=list, description="Evidence behind the estimate.")
    runs_consistent: Optional[int] = Field(
        None, description="Number of dip locations present in every Monte Carlo run."
    )


class SvdSpectrum(BaseModel):
    """
    Ratio of the two largest singular values of the data matrix for every assumed period.
    """

    model_config = ConfigDict(frozen=True)

    ratios: Dict[int, float]
    cap_value: float = Config.SVD_CAP_VALUE
    signal_length: int = Field(..., ge=1)

    @property
    def periods(self) -> List[int]:
        return sorted(self.ratios)
