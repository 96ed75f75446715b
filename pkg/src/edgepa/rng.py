"""Counter-based random streams.

Every stochastic routine in this package draws from a Philox generator
keyed by ``(seed, *labels)`` through :func:`stream`.  Philox is
counter-based, so a stream is fully determined by its key: replicates
keyed by distinct labels are independent and can be generated in any
order or in parallel, and rerunning with the same key reproduces the
draws bit for bit.

Within one stream, arrays are drawn in a fixed documented order (see the
callers); an array element at position ``(step, draw)`` therefore always
maps to the same counter block of the keyed stream.
"""

from __future__ import annotations

import numpy as np

# Stream labels; each consumer owns one label so draw layouts never collide.
COINS = 0
SLOTS = 1
TREE_SLOTS = 2
TREE_ULABELS = 3


def stream(seed: int, *labels: int) -> np.random.Generator:
    """Return the Philox generator keyed by ``(seed, *labels)``."""
    ss = np.random.SeedSequence((int(seed),) + tuple(int(x) for x in labels))
    return np.random.Generator(np.random.Philox(ss))


def child_seed(seed: int, index: int) -> int:
    """Derive the replicate seed for replicate ``index`` of a run seeded by ``seed``."""
    ss = np.random.SeedSequence((int(seed), int(index)))
    return int(ss.generate_state(1, np.uint64)[0])
