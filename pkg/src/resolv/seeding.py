"""Deterministic seed derivation.

Every stochastic routine in the package takes an explicit integer seed.
Nested work (per-community recursion, per-run sweep cells) derives child
seeds through numpy's SeedSequence spawn-key mechanism, so the derived
streams are independent of execution order and of each other.
"""

from __future__ import annotations

import numpy as np


def derive_seed(seed: int, *path: int) -> int:
    """Child seed for the subtask addressed by ``path`` under ``seed``.

    The same (seed, path) pair always yields the same child, and distinct
    paths yield statistically independent streams. Used for multiscale
    recursion (path = community ids down the tree) and sweep cells
    (path = (gamma_index, seed_index)).
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0])
