import math
from typing import ClassVar, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from period_scope.models.period import MonteCarloParams
from period_scope.models.signal import Waveform
from period_scope.utils.config import Config


class ExperimentConfig(BaseModel):
    """
    Everything an experiment needs to be replayed: the synthetic signal, the
    noise levels, the number of trials, the estimator parameters and the master seed.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    hidden_periods: List[int] = Field(
        [8, 11, 16],
        description="Hidden periods of the composite test signal. Examples: [8, 11, 16], [7, 13].",
    )
    waveforms: List[Waveform] = Field(
        [Waveform.TRIANGULAR, Waveform.COSINE, Waveform.TRIANGULAR],
        description="One generator per hidden period.",
    )
    amplitudes: List[float] = Field([1.0, 1.0, 1.0], description="One amplitude per hidden period.")
    length: int = Field(4119, alias="N", ge=4, description="Signal length N.")
    snr_db: Optional[float] = Field(32.0, description="SNR in dB; null for noiseless signals.")
    snr_sweep: List[float] = Field(
        default_factory=list, description="SNR values (dB) for sweep experiments."
    )
    n_sweep: List[int] = Field(
        default_factory=list, description="Signal lengths for the runtime comparison."
    )
    trials: int = Field(20, ge=1, description="Trials (seeds) per setting.")
    repeats: int = Field(3, ge=1, description="Timing repeats per method and length.")
    method: str = Field("variance", description="Estimator for reconstruction and SNR sweeps.")
    bench_methods: List[str] = Field(
        ["montecarlo", "svd"], description="Estimators timed by the runtime comparison."
    )
    monte_carlo: MonteCarloParams = Field(default_factory=MonteCarloParams)
    svd_cap: float = Field(Config.SVD_CAP_VALUE, gt=0)
    svd_zero_threshold: float = Field(Config.SVD_ZERO_THRESHOLD, ge=0)
    dc_offset: float = Field(
        0.5, description="DC level added to the signal by the DC redistribution check."
    )
    master_seed: int = Field(Config.DEFAULT_SEED)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ExperimentConfig":
        if not self.hidden_periods:
            raise ValueError("hidden_periods must not be empty")
        if any(p < 2 for p in self.hidden_periods):
            raise ValueError("hidden periods must be >= 2")
        if len(set(self.hidden_periods)) != len(self.hidden_periods):
            raise ValueError("hidden periods must be distinct")
        if len(self.waveforms) != len(self.hidden_periods):
            raise ValueError("waveforms need one entry per hidden period")
        if len(self.amplitudes) != len(self.hidden_periods):
            raise ValueError("amplitudes need one entry per hidden period")
        composite = self.composite_period
        for length in [self.length, *self.n_sweep]:
            if length < 4 * composite:
                raise ValueError(
                    f"N={length} is shorter than 4 x the composite period {composite}"
                )
        return self

    @property
    def composite_period(self) -> int:
        return math.lcm(*self.hidden_periods)


class TrialRecord(BaseModel):
    trial: int
    seed: int
    snr_db: Optional[float] = None
    estimate: Optional[int] = Field(None, description="Estimated period, None when estimation failed.")
    correct: bool
    seconds: float
    error: Optional[str] = None


class RuntimeRecord(BaseModel):
    method: str
    length: int
    seconds: List[float]
    median_seconds: float


class SlopeFit(BaseModel):
    method: str
    slope: float
    intercept: float
    r_value: float


class ReconstructionRecord(BaseModel):
    snr_db: Optional[float]
    seed: int
    estimated_period: Optional[int]
    period_hit: bool
    correlations: Dict[int, Optional[float]] = Field(
        default_factory=dict, description="Hidden period -> normalized correlation with the truth."
    )
    max_noise_strength: Optional[float] = Field(
        None, description="Largest normalized strength among subspaces dividing no hidden period."
    )
    error: Optional[str] = None


class SnrSummary(BaseModel):
    snr_db: Optional[float]
    trials: int
    hits: int
    mean_correlations: Dict[int, Optional[float]] = Field(default_factory=dict)
    mean_noise_strength: Optional[float] = None


class DcSplitResult(BaseModel):
    draws: int
    equal_total: float = Field(..., description="Summed correlation with the equal DC split.")
    best_random_total: float = Field(..., description="Best summed correlation over random splits.")
    best_random_alphas: Dict[int, float]


class ExperimentReport(BaseModel):
    """
    Outcome of one experiment run, written as JSON with companion CSV tables.
    """

    schema_version: int = Config.SCHEMA_VERSION
    experiment: str
    config: ExperimentConfig
    trials: List[TrialRecord] = Field(default_factory=list)
    hits: Optional[int] = None
    misses: Optional[int] = None
    mean_seconds: Optional[float] = None
    std_seconds: Optional[float] = None
    runtimes: List[RuntimeRecord] = Field(default_factory=list)
    slopes: Dict[str, SlopeFit] = Field(default_factory=dict)
    reconstructions: List[ReconstructionRecord] = Field(default_factory=list)
    snr_summary: List[SnrSummary] = Field(default_factory=list)
    noise_strength_rank_correlation: Optional[float] = None
    dc_split: Optional[DcSplitResult] = None

    # Wall-clock fields, left out of reproducibility comparisons
    TIMING_FIELDS: ClassVar[dict] = {
        "mean_seconds": True,
        "std_seconds": True,
        "runtimes": True,
        "slopes": True,
        "trials": {"__all__": {"seconds"}},
    }

    def deterministic_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True, exclude=self.TIMING_FIELDS)
