"""
Small-block channel code of the LP-WUS payload.

B=1 is sent as is, B=2 gets a single parity bit and 3 <= B <= 5 is encoded
with the (32, B) Reed-Muller code whose base sequences are shipped in
``data/rm_basis_32x11.txt``. Decoding is maximum likelihood over all 2^B
codewords after the rate-matched repetitions have been combined.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from lpwus.codec.payload import bits_table

logger = logging.getLogger("lpwus")

RM_BASIS_PATH = Path(__file__).parent / "data" / "rm_basis_32x11.txt"


@dataclass(frozen=True)
class RmBasis:
    matrix: np.ndarray

    def __post_init__(self):
        rows, cols = self.matrix.shape
        if rows != 32 or cols < 11:
            raise ValueError(f"Reed-Muller basis must be 32 x >=11, got {rows} x {cols}")
        if not np.isin(self.matrix, (0, 1)).all():
            raise ValueError("Reed-Muller basis must be binary")


@lru_cache(maxsize=1)
def load_rm_basis(path: Path = RM_BASIS_PATH) -> RmBasis:
    logger.debug(f"Loading Reed-Muller basis from {path}")
    matrix = np.loadtxt(path, dtype=np.uint8, comments="#", ndmin=2)
    matrix.setflags(write=False)
    return RmBasis(matrix)


def coded_length(B: int) -> int:
    if B == 1:
        return 1
    if B == 2:
        return 3
    if 3 <= B <= 5:
        return 32
    raise ValueError(f"Payload size B={B} not in 1..5")


def generator_matrix(B: int) -> np.ndarray:
    """``N x B`` binary matrix with ``d = G b mod 2``."""
    if B == 1:
        return np.array([[1]], dtype=np.uint8)
    if B == 2:
        return np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    coded_length(B)
    return np.array(load_rm_basis().matrix[:, :B])


def rate_matched_generator(B: int, E: int) -> np.ndarray:
    """``E x B`` matrix of the rate-matched bits ``f_k = d_(k mod N)``."""
    G = generator_matrix(B)
    return G[np.arange(E) % G.shape[0]]


def channel_encode(bits: Sequence[int]) -> np.ndarray:
    b = np.asarray(bits, dtype=np.int64)
    return ((generator_matrix(b.size) @ b) % 2).astype(np.uint8)


@lru_cache(maxsize=None)
def codebook(B: int) -> np.ndarray:
    """All codewords, row ``v`` is the codeword of payload value ``v``."""
    words = (bits_table(B).astype(np.int64) @ generator_matrix(B).T.astype(np.int64)) % 2
    words = words.astype(np.uint8)
    words.setflags(write=False)
    return words


def min_distance(B: int) -> int:
    words = codebook(B).astype(np.int16)
    dist = np.abs(words[:, None, :] - words[None, :, :]).sum(axis=2)
    np.fill_diagonal(dist, dist.max() + 1)
    return int(dist.min())


def rm_decode(f_hat: Sequence[int], B: int, soft: Optional[Sequence[float]] = None) -> np.ndarray:
    """
    ML decode rate-matched bits back to the ``B`` payload bits.

    Parameters
    ----------
    f_hat : sequence of int
        Hard rate-matched bits, length E.
    B : int
        Payload size.
    soft : sequence of float, optional
        Per-bit reliabilities, positive favouring 0. Replaces the
        bipolar mapping of ``f_hat`` when given.

    Returns
    -------
    numpy array
        The payload bits with the best correlation; the lowest payload value
        wins ties.
    """
    N = coded_length(B)
    if soft is None:
        metric = 1.0 - 2.0 * np.asarray(f_hat, dtype=float)
    else:
        metric = np.asarray(soft, dtype=float)
    combined = np.zeros(N)
    np.add.at(combined, np.arange(metric.size) % N, metric)
    scores = (1.0 - 2.0 * codebook(B)) @ combined
    return bits_table(B)[int(np.argmax(scores))]
