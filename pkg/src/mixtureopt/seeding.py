"""Deterministic RNG derivation.

Every stochastic component owns a ``numpy.random.Generator`` derived from an
integer seed plus an integer branch path, so that parallel work (replications,
optimizer runs) is reproducible independently of scheduling order.

Branch conventions used across the package (first branch element):

* 0 — population generation
* 1 — logged-data replications (second element = replication index)
* 2 — NSGA-II optimizer stream
"""

from __future__ import annotations

import numpy as np

STREAM_POPULATION = 0
STREAM_REPLICATION = 1
STREAM_OPTIMIZER = 2


def child_rng(seed: int, *branch: int) -> np.random.Generator:
    """Generator for ``(seed, branch...)``; identical arguments give identical streams."""
    entropy = [int(seed)] + [int(b) for b in branch]
    if any(e < 0 for e in entropy):
        raise ValueError(f"seed and branch indices must be non-negative, got {entropy}")
    return np.random.default_rng(np.random.SeedSequence(entropy))
