"""Seed derivation for reproducible, individually replayable random streams."""

import numpy as np

_MASK32 = (1 << 32) - 1
_MASK64 = (1 << 64) - 1


def _entropy(seed: int, keys: tuple) -> list:
    return [seed & _MASK64] + [int(key) & _MASK64 for key in keys]


def derive_seed(seed: int, *keys: int) -> int:
    """
    Derive an independent 64-bit seed from a master seed and a counter path,
    e.g. derive_seed(master, trial, record).
    """
    state = np.random.SeedSequence(_entropy(seed, keys)).generate_state(1, np.uint64)
    return int(state[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(_entropy(seed, keys)))


def subsample_rng(seed: int, run_index: int, period: int) -> np.random.Generator:
    """
    Counter-based stream keyed by (seed, run_index, period).

    The Philox key packs the seed in the high 64 bits and (run_index, period)
    in the low 64 bits, so every assumed period of every run draws from its
    own stream regardless of evaluation order.
    """
    key = ((seed & _MASK64) << 64) | ((run_index & _MASK32) << 32) | (period & _MASK32)
    return np.random.Generator(np.random.Philox(key=key))
