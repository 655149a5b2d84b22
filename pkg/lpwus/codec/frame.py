import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from lpwus.codec.line_coding import manchester_encode, rate_match
from lpwus.codec.payload import bits_table, bits_to_int
from lpwus.codec.reed_muller import channel_encode
from lpwus.codec.sequence_coding import sequence_encode

logger = logging.getLogger("lpwus")


@dataclass(frozen=True)
class OokFrame:
    """ON/OFF grid of one LP-WUS plus the sequence index of every ON-symbol."""

    g: np.ndarray
    seq_indices: np.ndarray
    L: int
    M: int
    bits: Tuple[int, ...]

    def __post_init__(self):
        if self.g.size != self.L * self.M:
            raise ValueError(f"g holds {self.g.size} OOK symbols, expected L*M={self.L * self.M}")
        if int(self.g.sum()) * 2 != self.g.size:
            raise ValueError("Manchester frame must be half ON")
        if self.seq_indices.size != self.g.size // 2:
            raise ValueError("one sequence index per ON-symbol expected")

    @property
    def G(self) -> int:
        return self.g.size

    @property
    def E(self) -> int:
        return self.g.size // 2

    @property
    def codepoint(self) -> int:
        return bits_to_int(self.bits)

    def on_positions(self) -> np.ndarray:
        return np.flatnonzero(self.g)

    def grid(self) -> np.ndarray:
        """``g`` as ``L`` rows of ``M`` OOK symbols."""
        return self.g.reshape(self.L, self.M)


def encode_frame(bits: Sequence[int], cfg) -> OokFrame:
    bits = tuple(int(b) for b in bits)
    if len(bits) != cfg.payload_bits:
        raise ValueError(f"payload has {len(bits)} bits, config expects B={cfg.payload_bits}")
    f = rate_match(channel_encode(bits), cfg.E)
    g = manchester_encode(f)
    seq = sequence_encode(bits, cfg)
    g.setflags(write=False)
    seq.setflags(write=False)
    return OokFrame(g=g, seq_indices=seq, L=cfg.L, M=cfg.M, bits=bits)


@lru_cache(maxsize=64)
def _patterns(B: int, E: int, n_codepoints: int) -> np.ndarray:
    table = bits_table(B)[:n_codepoints]
    rows = [manchester_encode(rate_match(channel_encode(b), E)) for b in table]
    patterns = 2.0 * np.array(rows, dtype=float) - 1.0
    patterns.setflags(write=False)
    return patterns


def candidate_patterns(cfg) -> np.ndarray:
    """Bipolar ON/OFF pattern of every legal codepoint, one row each."""
    return _patterns(cfg.payload_bits, cfg.E, cfg.n_codepoints)


def ml_pattern_decode(energies: Sequence[float], cfg) -> Tuple[np.ndarray, float]:
    """
    Correlate the received OOK energies with every candidate ON/OFF pattern.

    The score of a candidate is ``sum((2g - 1) * e) / sum(e)``: 1 for a clean
    match, around 0 for noise. An all-zero input scores 0 everywhere.

    Returns
    -------
    tuple
        The best payload bits (lowest codepoint on ties) and its score.
    """
    e = np.asarray(energies, dtype=float)
    if e.size != cfg.G:
        raise ValueError(f"expected G={cfg.G} energies, got {e.size}")
    patterns = candidate_patterns(cfg)
    total = e.sum()
    scores = patterns @ e / total if total > 0 else np.zeros(patterns.shape[0])
    best = int(np.argmax(scores))
    return bits_table(cfg.payload_bits)[best], float(scores[best])
