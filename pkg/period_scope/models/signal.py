from enum import Enum
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from period_scope.models.arrays import FloatVector


class Waveform(str, Enum):
    """
    Shapes the synthetic generators can tile into a periodic component.
    """

    TRIANGULAR = "tri"
    COSINE = "cos"
    RANDOM = "rand"


class Signal(BaseModel):
    """
    A finite real-valued sample sequence, the common currency of the toolkit.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    samples: FloatVector = Field(
        ...,
        description=(
            "The sample values x[0..N-1] (**required**). "
            "Must be non-empty and finite everywhere."
        ),
    )

    @field_validator("samples")
    @classmethod
    def _check_samples(cls, samples: np.ndarray) -> np.ndarray:
        if samples.size == 0:
            raise ValueError("a signal needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("signal samples must be finite")
        return samples

    @property
    def length(self) -> int:
        return int(self.samples.size)

    @property
    def power(self) -> float:
        """Mean-square power."""
        return float(np.mean(self.samples * self.samples))

    def __len__(self) -> int:
        return self.length


class GroundTruth(BaseModel):
    """
    A synthesized composite signal together with the hidden components it was built from.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    components: Dict[int, Signal] = Field(
        ...,
        description=(
            "Hidden period p_i -> zero-mean component tiled to the full length (**required**). "
            "Examples: {8: triangular, 11: cosine, 16: triangular}."
        ),
    )
    waveforms: Dict[int, Waveform] = Field(
        default_factory=dict, description="Hidden period -> generator used for it."
    )
    amplitudes: Dict[int, float] = Field(
        default_factory=dict, description="Hidden period -> generator amplitude."
    )
    clean: Signal = Field(..., description="Elementwise sum of the components.")
    noisy: Signal = Field(..., description="The clean signal plus calibrated Gaussian noise.")
    snr_db: Optional[float] = Field(
        None, description="Target SNR in dB; None means no noise was added."
    )
    seed: int = Field(..., description="Seed the noise (and random templates) were drawn from.")

    @property
    def composite_period(self) -> int:
        return int(np.lcm.reduce(list(self.components)))


def as_signal(value) -> Signal:
    """
    Accept a Signal or anything numpy can turn into a 1-D float array.
    """
    if isinstance(value, Signal):
        return value
    return Signal(samples=value)
