"""Seeded, splittable random streams.

All sampling goes through counter-based Philox generators.  Sub-streams for
parallel work are derived from the parent seed with :class:`numpy.random.SeedSequence`,
so the stream a task receives depends only on ``(seed, task index)``.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for task ``key`` under ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *key])))
