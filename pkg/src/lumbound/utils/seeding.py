"""Seed derivation for reproducible, order-independent stochastic work."""

from __future__ import annotations

import numpy as np


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for trial ``index`` of a run seeded with ``seed``.

    Each trial owns an independent PCG64 stream keyed on (seed, index), so
    trials can run in any order or in parallel and still reproduce exactly.
    """
    if seed < 0 or index < 0:
        raise ValueError(f"seed and index must be non-negative, got seed={seed}, index={index}")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def make_rng(seed: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.default_rng(seed)
