import logging

import numpy as np

from lpwus.config.lpwus_config import N_SC_WUS
from lpwus.errors import MoSkippedError, ScheduleError
from lpwus.waveform.iq_signal import IqSignal
from lpwus.waveform.numerology import Numerology
from lpwus.waveform.ofdm import synthesize_symbol
from lpwus.waveform.zadoff_chu import on_sequence_bank

logger = logging.getLogger("lpwus")


def ook_symbols(frame, cfg) -> np.ndarray:
    """Time-domain OOK content ``s_l`` of every WUS OFDM symbol, shape ``(L, 132)``.

    OFF blocks are zero; the ``k``-th ON block in time order carries the
    ON-sequence of ``frame.seq_indices[k]``.
    """
    bank = on_sequence_bank(cfg)
    blocks = np.zeros((frame.G, cfg.M_ZC), dtype=complex)
    on = frame.on_positions()
    blocks[on] = bank[frame.seq_indices]
    return blocks.reshape(frame.L, N_SC_WUS)


def modulate_frame(frame, cfg, schedule, mo_index: int = 0) -> IqSignal:
    """
    CP-OFDM signal of one LP-WUS in MO ``mo_index`` of ``schedule``.

    The signal covers every slot touched by the MO; WUS symbols are annotated
    with their sample spans, everything else is zero.

    Raises
    ------
    MoSkippedError
        The MO was dropped for lack of usable symbols.
    """
    entry = schedule.entry(mo_index)
    if entry.dropped:
        raise MoSkippedError(mo_index, len(entry.symbol_positions), cfg.L)
    if len(entry.symbol_positions) != frame.L:
        raise ScheduleError(f"MO {mo_index} holds {len(entry.symbol_positions)} symbols, frame has L={frame.L}")

    numerology = Numerology.from_config(cfg)
    first_slot = entry.symbol_positions[0][0]
    last_slot = entry.symbol_positions[-1][0]
    sig = IqSignal.blank(
        numerology,
        first_slot,
        last_slot,
        metadata={
            "kind": "lp-wus",
            "mo_index": mo_index,
            "beam_index": entry.beam_index,
            "lo_start": list(schedule.lo_start),
        },
    )
    samples = sig.samples.copy()
    spans = []
    for s_l, (slot, symbol) in zip(ook_symbols(frame, cfg), entry.symbol_positions):
        span = sig.span(slot, symbol, entry.beam_index)
        x = synthesize_symbol(s_l, numerology.fft_size, span.cp)
        samples[span.start : span.start + x.size] = x
        spans.append(span)
    samples.setflags(write=False)
    logger.debug(f"Modulated payload {frame.bits} into MO {mo_index}, {samples.size} samples")
    return IqSignal(samples, numerology, first_slot, tuple(spans), sig.metadata)
