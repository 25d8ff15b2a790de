"""Synthetic test-bed signals: periodic generators, composition, and
SNR-calibrated Gaussian noise.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from period_scope.models.signal import GroundTruth, Signal, Waveform, as_signal
from period_scope.utils.errors import (
    BadParamsError,
    LengthMismatchError,
    ZeroNoiseError,
    ZeroPowerSignalError,
)
from period_scope.utils.rng import derive_seed, make_rng


def _check_generator_args(period: int, length: int, amplitude: float = 1.0) -> None:
    if isinstance(period, bool) or int(period) != period or period < 2:
        raise BadParamsError(f"period must be an integer >= 2, got {period!r}")
    if int(length) != length or length < period:
        raise BadParamsError(f"length must be an integer >= period ({period}), got {length!r}")
    if not (math.isfinite(amplitude) and amplitude > 0):
        raise BadParamsError(f"amplitude must be a positive real, got {amplitude!r}")


def _tile(template: np.ndarray, length: int) -> Signal:
    repeats = -(-length // template.size)
    return Signal(samples=np.tile(template, repeats)[:length])


def gen_triangular(period: int, amplitude: float, length: int) -> Signal:
    """
    Mean-zero triangular wave. One period is a linear ramp that starts at its
    peak `amplitude` at n = 0, falls by 2 * amplitude / period per sample to
    its trough at n = floor(period / 2) and climbs back. The mean of the ramp
    is subtracted afterwards.
    """
    _check_generator_args(period, length, amplitude)
    n = np.arange(period)
    ramp = amplitude * (1.0 - 2.0 * np.minimum(n, period - n) / period)
    return _tile(ramp - ramp.mean(), length)


def gen_cosine(period: int, amplitude: float, length: int) -> Signal:
    """amplitude * cos(2 pi n / period), exactly period-periodic in n."""
    _check_generator_args(period, length, amplitude)
    template = amplitude * np.cos(2.0 * np.pi * np.arange(period) / period)
    template -= template.mean()
    return _tile(template, length)


def gen_random_pattern(period: int, length: int, rng_seed: int, amplitude: float = 1.0) -> Signal:
    """A uniform random template of one period, mean-subtracted and tiled."""
    _check_generator_args(period, length, amplitude)
    template = make_rng(rng_seed, period).uniform(-amplitude, amplitude, size=period)
    return _tile(template - template.mean(), length)


def generate(
    waveform: Waveform, period: int, amplitude: float, length: int, rng_seed: int
) -> Signal:
    waveform = Waveform(waveform)
    if waveform is Waveform.TRIANGULAR:
        return gen_triangular(period, amplitude, length)
    if waveform is Waveform.COSINE:
        return gen_cosine(period, amplitude, length)
    return gen_random_pattern(period, length, rng_seed, amplitude)


def compose(components: Sequence) -> Signal:
    """Elementwise sum of equal-length signals."""
    if not components:
        raise BadParamsError("compose needs at least one component")
    arrays = [as_signal(component).samples for component in components]
    lengths = {array.size for array in arrays}
    if len(lengths) != 1:
        raise LengthMismatchError(f"Cannot compose signals of lengths {sorted(lengths)}")
    return Signal(samples=np.sum(arrays, axis=0))


def add_noise_snr(clean, snr_db: Optional[float], rng_seed: int) -> Signal:
    """
    Add i.i.d. zero-mean Gaussian noise whose target power sits snr_db below
    the clean signal's mean-square power. snr_db of None or +inf adds nothing.
    """
    clean = as_signal(clean)
    if snr_db is None or snr_db == math.inf:
        return clean
    if math.isnan(snr_db) or snr_db == -math.inf:
        raise BadParamsError(f"snr_db must be a real number or +inf, got {snr_db!r}")
    power = clean.power
    if power <= 0.0:
        raise ZeroPowerSignalError("Cannot calibrate noise against a zero-power signal")
    noise_power = power / (10.0 ** (snr_db / 10.0))
    noise = math.sqrt(noise_power) * make_rng(rng_seed).standard_normal(clean.length)
    return Signal(samples=clean.samples + noise)


def measure_snr(clean, noisy) -> float:
    """10 log10 of clean energy over the energy of (noisy - clean), in dB."""
    clean = as_signal(clean)
    noisy = as_signal(noisy)
    if clean.length != noisy.length:
        raise LengthMismatchError(
            f"clean has {clean.length} samples but noisy has {noisy.length}"
        )
    noise = noisy.samples - clean.samples
    noise_energy = float(noise @ noise)
    if noise_energy == 0.0:
        raise ZeroNoiseError("The noisy signal equals the clean one")
    signal_energy = float(clean.samples @ clean.samples)
    return 10.0 * math.log10(signal_energy / noise_energy)


def lcm_period(periods: Sequence[int]) -> int:
    """Composite period of a sum of components with the given periods."""
    return int(math.lcm(*[int(p) for p in periods]))


def synthesize(
    periods: Sequence[int],
    length: int,
    waveforms: Optional[Sequence[Waveform]] = None,
    amplitudes: Optional[Sequence[float]] = None,
    snr_db: Optional[float] = None,
    seed: int = 0,
) -> GroundTruth:
    """
    Build a composite test signal and keep its hidden components as ground truth.

    :param periods: Hidden periods, e.g. [8, 11, 16].
    :param length: Number of samples N.
    :param waveforms: One waveform per period; triangular by default.
    :param amplitudes: One amplitude per period; 1.0 by default.
    :param snr_db: Target SNR of the noisy copy, None for a noiseless copy.
    :param seed: Seed for random templates and for the noise.
    """
    if not periods:
        raise BadParamsError("At least one hidden period is required")
    if len(set(periods)) != len(periods):
        raise BadParamsError(f"Hidden periods must be distinct, got {list(periods)}")
    waveforms = list(waveforms or [Waveform.TRIANGULAR] * len(periods))
    amplitudes = list(amplitudes or [1.0] * len(periods))
    if len(waveforms) != len(periods) or len(amplitudes) != len(periods):
        raise BadParamsError("waveforms and amplitudes need one entry per hidden period")

    components: Dict[int, Signal] = {}
    for period, waveform, amplitude in zip(periods, waveforms, amplitudes):
        components[int(period)] = generate(
            waveform, period, amplitude, length, derive_seed(seed, 0, period)
        )
    clean = compose(list(components.values()))
    noisy = add_noise_snr(clean, snr_db, derive_seed(seed, 1))
    logging.debug(f"Synthesized periods {list(components)} N={length} snr={snr_db} seed={seed}")
    return GroundTruth(
        components=components,
        waveforms={int(p): Waveform(w) for p, w in zip(periods, waveforms)},
        amplitudes={int(p): float(a) for p, a in zip(periods, amplitudes)},
        clean=clean,
        noisy=noisy,
        snr_db=snr_db,
        seed=seed,
    )


def resend(truth: GroundTruth, k: int, seed: int) -> List[Signal]:
    """
    k independent noisy observations of the same clean signal at the truth's SNR.
    """
    if k < 1:
        raise BadParamsError(f"resends must be >= 1, got {k}")
    return [add_noise_snr(truth.clean, truth.snr_db, derive_seed(seed, 2, i)) for i in range(k)]
