"""SVD baseline: per assumed period, the ratio of the two largest singular
values of the data matrix. A noiseless periodic block is rank one, so the
ratio peaks at the period.
"""

import logging
from typing import Literal, Tuple

import numpy as np
import scipy.linalg

from period_scope.models.period import (
    DataMatrix,
    EstimationMethod,
    PeriodEstimate,
    SvdSpectrum,
)
from period_scope.models.signal import as_signal
from period_scope.services.period_finder import MIN_SIGNAL_LENGTH
from period_scope.utils.config import Config
from period_scope.utils.errors import BadParamsError, TooShortError

SingularValueMethod = Literal["svd", "gram"]


def _top_two(values: np.ndarray, method: SingularValueMethod = "svd") -> Tuple[float, float]:
    if values.size == 0:
        raise BadParamsError("Singular values of an empty matrix are undefined")
    if method == "gram":
        # Eigenvalues of the Gram matrix on the short side
        short = values if values.shape[0] <= values.shape[1] else values.T
        gram = short @ short.T
        size = gram.shape[0]
        low = max(size - 2, 0)
        eigenvalues = scipy.linalg.eigh(
            gram, eigvals_only=True, subset_by_index=[low, size - 1]
        )
        singular = np.sqrt(np.clip(eigenvalues[::-1], 0.0, None))
    elif method == "svd":
        singular = scipy.linalg.svdvals(values)
    else:
        raise BadParamsError(f"Unknown singular value method {method!r}")
    first = float(singular[0])
    second = float(singular[1]) if singular.size > 1 else 0.0
    return first, second


def top_two_singular_values(D, method: SingularValueMethod = "svd") -> Tuple[float, float]:
    """
    The two largest singular values sigma1 >= sigma2 >= 0 of a data matrix.

    "svd" runs LAPACK's bidiagonalization and resolves sigma2 down to
    machine precision relative to sigma1. "gram" eigensolves the smaller
    Gram matrix, which is cheaper but only resolves sigma2 to about
    1e-8 * sigma1.
    """
    values = D.values if isinstance(D, DataMatrix) else np.asarray(D, dtype=np.float64)
    if values.ndim != 2:
        raise BadParamsError(f"Expected a matrix, got shape {values.shape}")
    return _top_two(values, method)


def svd_spectrum(
    signal,
    cap_value: float = Config.SVD_CAP_VALUE,
    zero_threshold: float = Config.SVD_ZERO_THRESHOLD,
    method: SingularValueMethod = "svd",
) -> SvdSpectrum:
    """
    sigma1 / sigma2 for every assumed period P = 2 .. floor(N/2). Where
    sigma2 <= zero_threshold * sigma1 the ratio is reported as cap_value.
    """
    signal = as_signal(signal)
    if signal.length < MIN_SIGNAL_LENGTH:
        raise TooShortError(
            f"Need at least {MIN_SIGNAL_LENGTH} samples to scan periods, got {signal.length}"
        )
    samples = signal.samples
    ratios = {}
    for P in range(2, signal.length // 2 + 1):
        rows = signal.length // P
        first, second = _top_two(samples[: rows * P].reshape(rows, P), method)
        if second <= zero_threshold * first:
            # A zero matrix has no dominant direction either
            ratios[P] = cap_value if first > 0.0 else 1.0
        else:
            ratios[P] = first / second
    return SvdSpectrum(ratios=ratios, cap_value=cap_value, signal_length=signal.length)


def estimate_period_svd(
    signal,
    cap_value: float = Config.SVD_CAP_VALUE,
    zero_threshold: float = Config.SVD_ZERO_THRESHOLD,
    method: SingularValueMethod = "svd",
) -> PeriodEstimate:
    """The assumed period with the largest singular value ratio; ties go to the smallest P."""
    spectrum = svd_spectrum(signal, cap_value, zero_threshold, method)
    best = max(spectrum.periods, key=lambda P: (spectrum.ratios[P], -P))
    logging.info(f"SVD estimate: period {best} (ratio {spectrum.ratios[best]:.6g})")
    return PeriodEstimate(period=best, score=spectrum.ratios[best], method=EstimationMethod.SVD)
