"""Seeded random streams"""
import numpy as np


PROCESS_NOISE_STREAM = 0
MEASUREMENT_NOISE_STREAM = 1
INITIAL_STATE_STREAM = 2


def run_seed(base_seed: int, run_index: int) -> int:
    """Seed of one Monte Carlo run"""
    return base_seed + run_index


def make_rng(seed: int, stream: int) -> np.random.Generator:
    """
    Independent generator for (seed, stream).

    SFC64 with a SeedSequence entropy pool gives the same bits on every platform
    for a fixed NumPy version.
    """
    return np.random.Generator(np.random.SFC64(np.random.SeedSequence([seed, stream])))
