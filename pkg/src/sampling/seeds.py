"""Seed handling: PCG64 everywhere, per-trial streams via SeedSequence spawn keys."""

import numpy as np


def derive_seed(master: int, *keys: int) -> int:
    """64-bit seed for the stream (master, keys...). Stable across platforms."""
    sequence = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))
