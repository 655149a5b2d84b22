import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from lpwus.codec.frame import ml_pattern_decode
from lpwus.codec.line_coding import manchester_hard_decode
from lpwus.codec.payload import bits_to_int
from lpwus.codec.reed_muller import rm_decode
from lpwus.errors import MoSkippedError, ScheduleError
from lpwus.procedures.codepoints import codepoint_to_targets
from lpwus.receiver.reports import DetectionReport, ReceiverKind
from lpwus.waveform.ofdm import extract_ook_blocks

logger = logging.getLogger("lpwus")


def wus_positions(y, cfg, schedule=None, mo_index: int = 0) -> List[Tuple[int, int]]:
    """WUS symbol positions, from the schedule when given, else from the annotations."""
    if schedule is not None:
        entry = schedule.entry(mo_index)
        if entry.dropped:
            raise MoSkippedError(mo_index, len(entry.symbol_positions), cfg.L)
        positions = list(entry.symbol_positions)
    else:
        positions = y.positions()
    if len(positions) != cfg.L:
        raise ScheduleError(f"{len(positions)} WUS symbols located, L={cfg.L}")
    return positions


def ook_blocks(y, positions: Sequence[Tuple[int, int]], M: int) -> np.ndarray:
    """Received OOK blocks of the given OFDM symbols, one row per OOK symbol."""
    return np.concatenate([extract_ook_blocks(y.useful(slot, symbol), M) for slot, symbol in positions])


def block_energies(blocks: np.ndarray) -> np.ndarray:
    return np.sum(np.abs(blocks) ** 2, axis=1)


def ed_demodulate(y, cfg, schedule=None, mo_index: int = 0) -> np.ndarray:
    """Energy ``e_i`` of each of the ``G`` OOK symbols of a WUS."""
    return block_energies(ook_blocks(y, wus_positions(y, cfg, schedule, mo_index), cfg.M))


def gate(score: float, threshold: float) -> bool:
    return score > 0.0 and score >= threshold


def report_codepoint(
    codepoint: int, score: float, cfg, kind: ReceiverKind, sync: Optional[int] = None
) -> DetectionReport:
    if codepoint >= cfg.n_codepoints:
        logger.debug(f"{kind.value}: decoded codepoint {codepoint} is not configured")
        return DetectionReport.missed(score, kind, sync)
    return DetectionReport(True, codepoint, score, kind, codepoint_to_targets(codepoint, cfg), sync)


def ed_decode(
    e: Sequence[float],
    cfg,
    far_threshold: Optional[float] = None,
    method: str = "ml",
    sync: Optional[int] = None,
) -> DetectionReport:
    """
    Energy-detector verdict on the OOK energies of one WUS.

    The gate compares the best normalized pattern score with the threshold
    (``cfg.detection_threshold`` by default). Past the gate the payload comes
    from the pattern correlator (``method="ml"``) or from Manchester pair
    comparisons followed by the channel decoder (``method="hard"``).
    ``sync`` is the LP-SS timing estimate, in OOK symbols, that located the
    WUS; it is copied into the report.
    """
    threshold = cfg.detection_threshold if far_threshold is None else far_threshold
    bits, score = ml_pattern_decode(e, cfg)
    if not gate(score, threshold):
        return DetectionReport.missed(score, ReceiverKind.ED, sync)
    if method == "hard":
        bits = rm_decode(manchester_hard_decode(e), cfg.payload_bits)
    elif method != "ml":
        raise ValueError(f"unknown ED decoding method {method!r}")
    return report_codepoint(bits_to_int(bits), score, cfg, ReceiverKind.ED, sync)
