"""Named random substreams derived from a single seed.

Every random draw in the package flows from one user-facing seed through
`substream(seed, *names)`, so that independent pieces of work (instances,
table rows, optimizer restarts) get decorrelated yet fully reproducible
generators regardless of evaluation order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream(seed: int, *names: object) -> np.random.Generator:
    """Return a Generator keyed by ``seed`` and a tuple of stream names.

    Names may be strings or integers; the same (seed, names) pair always
    yields the same stream, on any platform.
    """
    digest = hashlib.sha256(repr(tuple(names)).encode()).digest()
    words = [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]
    return np.random.default_rng(np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *words]))
