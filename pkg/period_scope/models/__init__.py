from period_scope.models.experiment import ExperimentConfig, ExperimentReport
from period_scope.models.period import (
    DataMatrix,
    DipRecord,
    EstimationMethod,
    MonteCarloParams,
    PeriodEstimate,
    SvdSpectrum,
    VarianceProfile,
)
from period_scope.models.ramanujan import ComponentSet, Decomposition, RamanujanBasis
from period_scope.models.signal import GroundTruth, Signal, Waveform
from period_scope.models.state import AnalysisState

__all__ = [
    "AnalysisState",
    "ComponentSet",
    "DataMatrix",
    "Decomposition",
    "DipRecord",
    "EstimationMethod",
    "ExperimentConfig",
    "ExperimentReport",
    "GroundTruth",
    "MonteCarloParams",
    "PeriodEstimate",
    "RamanujanBasis",
    "Signal",
    "SvdSpectrum",
    "VarianceProfile",
    "Waveform",
]
