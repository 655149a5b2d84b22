"""
Coherent detector (CD).

The CD shares the energy detector's gate, then locates the ON OOK symbol of
every Manchester pair (the stronger half, the second one on ties) and
decides its sequence index by the largest correlation magnitude against the
configured ON-sequences. The payload is recovered from the sequence indices
alone.
"""

import logging
from typing import Optional

import numpy as np

from lpwus.codec.frame import ml_pattern_decode
from lpwus.codec.payload import bits_to_int
from lpwus.codec.sequence_coding import sequence_decode
from lpwus.receiver.energy_detector import (
    block_energies,
    gate,
    ook_blocks,
    report_codepoint,
    wus_positions,
)
from lpwus.receiver.reports import DetectionReport, ReceiverKind
from lpwus.waveform.zadoff_chu import on_sequence_bank

logger = logging.getLogger("lpwus")


def on_symbol_indices(e: np.ndarray) -> np.ndarray:
    """Index of the ON half of every Manchester pair."""
    pairs = np.arange(e.size // 2)
    return 2 * pairs + (e[0::2] <= e[1::2])


def sequence_indices(blocks: np.ndarray, cfg) -> np.ndarray:
    """``argmax_c |<y_m, r_c>|`` for every row of ``blocks``."""
    corr = np.abs(blocks @ on_sequence_bank(cfg).conj().T)
    return np.argmax(corr, axis=1)


def cd_decode(
    y,
    cfg,
    schedule=None,
    mo_index: int = 0,
    far_threshold: Optional[float] = None,
    sync: Optional[int] = None,
) -> DetectionReport:
    if cfg.N_seq < 2:
        raise ValueError("the coherent detector needs N_seq >= 2")
    threshold = cfg.detection_threshold if far_threshold is None else far_threshold
    blocks = ook_blocks(y, wus_positions(y, cfg, schedule, mo_index), cfg.M)
    e = block_energies(blocks)
    _, score = ml_pattern_decode(e, cfg)
    if not gate(score, threshold):
        return DetectionReport.missed(score, ReceiverKind.CD, sync)
    c_hat = sequence_indices(blocks[on_symbol_indices(e)], cfg)
    bits = sequence_decode(c_hat, cfg.payload_bits, cfg)
    return report_codepoint(bits_to_int(bits), score, cfg, ReceiverKind.CD, sync)
