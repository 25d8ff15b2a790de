import numpy as np
import pytest

from period_scope.models.experiment import ExperimentConfig
from period_scope.models.signal import Waveform
from period_scope.services.signals import synthesize


@pytest.fixture
def noiseless_7_13():
    """Triangular periods 7 and 13, composite period 91."""
    return synthesize([7, 13], 400, [Waveform.TRIANGULAR, Waveform.TRIANGULAR], seed=3)


@pytest.fixture
def composite_32db():
    """The {8, 11, 16} test signal, composite period 176, at 32 dB."""
    return synthesize(
        [8, 11, 16],
        4119,
        [Waveform.TRIANGULAR, Waveform.COSINE, Waveform.TRIANGULAR],
        snr_db=32.0,
        seed=1,
    )


@pytest.fixture
def small_config():
    return ExperimentConfig(
        hidden_periods=[7, 13],
        waveforms=["tri", "tri"],
        amplitudes=[1.0, 1.0],
        N=400,
        snr_db=None,
        trials=3,
        master_seed=11,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
