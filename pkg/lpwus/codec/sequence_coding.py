"""
Parallel payload transmission through the ON-sequence index.

With ``N_seq >= 2`` each ON OOK symbol additionally carries
``delta = log2(N_seq)`` bits in the choice of its ON-sequence. The payload is
zero-padded in front of the MSB to a multiple of ``delta``, repeated to
``E * delta`` bits and cut into ``delta``-bit blocks, one per ON-symbol.
"""

from typing import Sequence

import numpy as np

from lpwus.codec.payload import bits_to_int, int_to_bits


def padding_bits(B: int, delta: int) -> int:
    return (-B) % delta if delta else 0


def sequence_encode(bits: Sequence[int], cfg) -> np.ndarray:
    """Sequence index ``c_m`` of each of the ``E`` ON-symbols."""
    if cfg.N_seq == 1:
        return np.zeros(cfg.E, dtype=np.int64)
    delta = cfg.delta
    d_s = np.concatenate([np.zeros(padding_bits(len(bits), delta), dtype=np.uint8), np.asarray(bits, dtype=np.uint8)])
    f_s = d_s[np.arange(cfg.E * delta) % d_s.size]
    blocks = f_s.reshape(cfg.E, delta)
    return np.array([bits_to_int(block) for block in blocks], dtype=np.int64)


def sequence_decode(c_hat: Sequence[int], B: int, cfg) -> np.ndarray:
    """Invert :func:`sequence_encode` by majority vote over the repetitions.

    Ties vote 0. The leading padding bits are dropped.
    """
    if cfg.N_seq == 1:
        raise ValueError("N_seq=1 carries no bits in the sequence index")
    delta = cfg.delta
    B_P = padding_bits(B, delta)
    f_s = np.array([b for c in c_hat for b in int_to_bits(int(c), delta)], dtype=np.int64)
    n = B + B_P
    votes = np.zeros(n, dtype=np.int64)
    np.add.at(votes, np.arange(f_s.size) % n, 2 * f_s - 1)
    return (votes > 0).astype(np.uint8)[B_P:]
