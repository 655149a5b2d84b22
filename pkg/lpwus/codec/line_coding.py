from typing import Sequence

import numpy as np


def rate_match(d: Sequence[int], E: int) -> np.ndarray:
    """Cyclic repetition ``f_k = d_(k mod N)`` up to ``E`` bits."""
    d = np.asarray(d, dtype=np.uint8)
    if E < 1:
        raise ValueError(f"E={E} must be >= 1")
    return d[np.arange(E) % d.size]


def manchester_encode(f: Sequence[int]) -> np.ndarray:
    """0 -> [1, 0], 1 -> [0, 1]."""
    f = np.asarray(f, dtype=np.uint8)
    g = np.empty(2 * f.size, dtype=np.uint8)
    g[0::2] = 1 - f
    g[1::2] = f
    return g


def manchester_hard_decode(metrics: Sequence[float]) -> np.ndarray:
    """Pairwise comparison of Manchester halves.

    ``f_k`` is 0 only when the first half is strictly stronger; equal halves
    decode to 1.
    """
    e = np.asarray(metrics, dtype=float)
    if e.size % 2:
        raise ValueError(f"Manchester metrics must come in pairs, got {e.size}")
    return (e[0::2] <= e[1::2]).astype(np.uint8)
