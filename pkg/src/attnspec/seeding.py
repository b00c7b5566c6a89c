"""Deterministic seeding.

Every random draw in the package flows through one 64-bit master seed.
Sub-streams are derived with ``numpy.random.SeedSequence`` spawn keys, so a
stream is identified by ``(master_seed, *path)`` and is independent of the
order in which other streams are created or consumed.  This is what makes
module-level parallelism (sweep fan-out, Monte-Carlo trials) reproducible.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive", "rng"]


def derive(seed: int, *path: int) -> np.random.SeedSequence:
    """Seed sequence for the sub-stream identified by ``path`` under ``seed``."""
    return np.random.SeedSequence(seed, spawn_key=tuple(path))


def rng(seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for the sub-stream identified by ``path`` under ``seed``."""
    return np.random.Generator(np.random.PCG64(derive(seed, *path)))
